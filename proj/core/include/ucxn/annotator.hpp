#pragma once

#include <string>
#include <vector>

#include "ucxn/conllu.hpp"
#include "ucxn/matcher.hpp"
#include "ucxn/pattern.hpp"

namespace ucxn {

/// One identified construction, ready to be written into MISC.
struct ConstructionInstance {
  std::string name;
  int head = 0;
  // (element role, element head token id), in element-declaration order
  std::vector<std::pair<std::string, int>> elements;

  friend bool operator==(const ConstructionInstance&,
                         const ConstructionInstance&) = default;
};

/// The token that carries `Cxn`: minimal tree depth, earliest id on ties.
/// Throws std::invalid_argument on an empty id set.
int head_of_match(const Sentence& sentence, const std::vector<int>& token_ids);

ConstructionInstance instance_from_match(const Query& query,
                                         const Sentence& sentence,
                                         const Binding& binding);

struct AnnotationSummary {
  // (query name, instances written), in query order
  std::vector<std::pair<std::string, int>> per_query;
  int sentences_skipped = 0;
  int keys_written = 0;  // Cxn/CxnElt MISC chunks added

  int count_for(std::string_view name) const {
    for (const auto& [n, c] : per_query)
      if (n == name) return c;
    return 0;
  }
};

/// Re-annotates one sentence in place: existing Cxn/CxnElt keys are dropped
/// first, then every match of every query is written. Counts accumulate
/// into `summary` (which must carry one per_query entry per query).
void annotate_sentence(Sentence& sentence, const std::vector<Query>& queries,
                       AnnotationSummary& summary);

AnnotationSummary annotate_document(Document& doc,
                                    const std::vector<Query>& queries);

/// Removes every Cxn/CxnElt key; returns how many chunks were dropped.
int strip_annotations(Sentence& sentence);
int strip_annotations(Document& doc);

/// Prepares a summary with zeroed per-query counters.
AnnotationSummary make_summary(const std::vector<Query>& queries);

}  // namespace ucxn
