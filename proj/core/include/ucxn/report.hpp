#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ucxn/conllu.hpp"

namespace ucxn {

struct CountTable {
  std::map<std::string, long> rows;  // construction name -> occurrences
  long sentences = 0;
  long tokens = 0;  // syntactic words

  long grand_total() const {
    long total = 0;
    for (const auto& [name, count] : rows) total += count;
    return total;
  }
};

/// Counts Cxn value occurrences ('+'-joined values count separately).
CountTable count_constructions(const Document& doc);
void add_to_counts(CountTable& table, const Sentence& sentence);

inline constexpr std::array<std::string_view, 8> kWhBuckets = {
    "advmod", "nsubj", "obj", "det", "obl", "ccomp", "xcomp", "other"};

struct WhPositionCell {
  long pre = 0;
  long post = 0;
};

/// 8 deprel buckets x {non-interrogative, interrogative}.
struct WhPositionTable {
  WhPositionCell cells[8][2];

  WhPositionCell& cell(int bucket, bool interrogative) {
    return cells[bucket][interrogative ? 1 : 0];
  }
  const WhPositionCell& cell(int bucket, bool interrogative) const {
    return cells[bucket][interrogative ? 1 : 0];
  }
};

struct WhReportOptions {
  // upos values forming the comparison class; tokens with PronType=Int
  // belong to the class regardless of upos.
  std::vector<std::string> baseline_upos = {"PRON"};
};

/// Expects a document already annotated with interrogative queries: a token
/// counts as interrogative only when it has PronType=Int and sits in the
/// yield of a clause head carrying an Interrogative Cxn value.
WhPositionTable wh_position_report(const Document& doc,
                                   const WhReportOptions& options = {});
void add_to_wh_report(WhPositionTable& table, const Sentence& sentence,
                      const WhReportOptions& options);

enum class TableFormat { Tsv, Jsonl };

std::string emit_table(const CountTable& table, TableFormat format);
std::string emit_table(const WhPositionTable& table, TableFormat format);

}  // namespace ucxn
