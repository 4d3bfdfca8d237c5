#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ucxn/conllu.hpp"
#include "ucxn/pattern.hpp"

namespace ucxn {

/// Injective assignment of the query's positive node names to word ids,
/// stored in node-declaration order.
struct Binding {
  std::vector<std::pair<std::string, int>> assignment;

  int id_of(std::string_view name) const {
    for (const auto& [n, id] : assignment)
      if (n == name) return id;
    return 0;
  }

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct MatchResult {
  std::string sentence_id;
  std::string query_name;
  Binding binding;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// All matches of `query` in `sentence`, in canonical order (sorted by the
/// tuple of bound ids in node-declaration order). Returns nothing when the
/// sentence has no usable tree.
std::vector<Binding> match_sentence(const Query& query, const Sentence& sentence);

/// Per-sentence results in document order. Sentences with tree-breaking
/// issues are skipped; `skipped`, when given, receives their count.
std::vector<MatchResult> match_document(const Query& query, const Document& doc,
                                        int* skipped = nullptr);

/// Reference semantics: enumerates every injective assignment and filters.
/// Independent of match_sentence; kept as the oracle for property tests.
/// Throws std::length_error for sentences over 14 words.
std::vector<Binding> brute_force_match(const Query& query,
                                       const Sentence& sentence);

}  // namespace ucxn
