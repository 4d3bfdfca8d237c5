#include "ucxn/annotator.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucxn {

namespace {

bool is_ucxn_chunk(const std::string& chunk) {
  return chunk.rfind("Cxn=", 0) == 0 || chunk.rfind("CxnElt=", 0) == 0;
}

// Joins values with '+' and appends the key after the existing MISC chunks,
// leaving their order untouched.
void append_misc_key(Token& token, const std::string& key,
                     const std::vector<std::string>& values) {
  std::string chunk = key + "=";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) chunk += '+';
    chunk += values[i];
  }
  token.misc.push_back(std::move(chunk));
}

}  // namespace

int head_of_match(const Sentence& sentence, const std::vector<int>& token_ids) {
  if (token_ids.empty())
    throw std::invalid_argument("head_of_match: empty token set");
  int best = 0;
  int best_depth = -1;
  for (int id : token_ids) {
    int d = token_depth(sentence, id);
    if (best == 0 || d < best_depth || (d == best_depth && id < best)) {
      best = id;
      best_depth = d;
    }
  }
  return best;
}

ConstructionInstance instance_from_match(const Query& query,
                                         const Sentence& sentence,
                                         const Binding& binding) {
  ConstructionInstance inst;
  inst.name = query.name;
  if (!query.head_node.empty()) {
    inst.head = binding.id_of(query.head_node);
  } else {
    std::vector<int> ids;
    ids.reserve(binding.assignment.size());
    for (const auto& [name, id] : binding.assignment) ids.push_back(id);
    inst.head = head_of_match(sentence, ids);
  }
  for (const auto& [node, role] : query.elements)
    inst.elements.emplace_back(role, binding.id_of(node));
  return inst;
}

void annotate_sentence(Sentence& sentence, const std::vector<Query>& queries,
                       AnnotationSummary& summary) {
  strip_annotations(sentence);
  if (!sentence.tree.ok) {
    ++summary.sentences_skipped;
    return;
  }

  int n = sentence.word_count();
  // Per token: construction names (for Cxn) and element records (for
  // CxnElt), both in query order with exact duplicates collapsed.
  std::vector<std::vector<std::string>> cxn(n + 1), elt(n + 1);

  for (size_t qi = 0; qi < queries.size(); ++qi) {
    const Query& query = queries[qi];
    for (const Binding& binding : match_sentence(query, sentence)) {
      ConstructionInstance inst = instance_from_match(query, sentence, binding);
      auto& head_values = cxn[inst.head];
      bool fresh = std::find(head_values.begin(), head_values.end(),
                             inst.name) == head_values.end();
      if (fresh) {
        head_values.push_back(inst.name);
        summary.per_query[qi].second += 1;
      }
      for (const auto& [role, id] : inst.elements) {
        std::string value =
            inst.name + ":" + std::to_string(inst.head) + ":" + role;
        auto& elt_values = elt[id];
        if (std::find(elt_values.begin(), elt_values.end(), value) ==
            elt_values.end())
          elt_values.push_back(std::move(value));
      }
    }
  }

  for (int id = 1; id <= n; ++id) {
    Token* t = sentence.word(id);
    if (!cxn[id].empty()) {
      append_misc_key(*t, "Cxn", cxn[id]);
      ++summary.keys_written;
    }
    if (!elt[id].empty()) {
      append_misc_key(*t, "CxnElt", elt[id]);
      ++summary.keys_written;
    }
  }
}

AnnotationSummary make_summary(const std::vector<Query>& queries) {
  AnnotationSummary summary;
  summary.per_query.reserve(queries.size());
  for (const auto& q : queries) summary.per_query.emplace_back(q.name, 0);
  return summary;
}

AnnotationSummary annotate_document(Document& doc,
                                    const std::vector<Query>& queries) {
  AnnotationSummary summary = make_summary(queries);
  for (auto& s : doc.sentences) annotate_sentence(s, queries, summary);
  return summary;
}

int strip_annotations(Sentence& sentence) {
  int removed = 0;
  for (auto& t : sentence.tokens) {
    auto it = std::remove_if(t.misc.begin(), t.misc.end(), is_ucxn_chunk);
    removed += static_cast<int>(t.misc.end() - it);
    t.misc.erase(it, t.misc.end());
  }
  return removed;
}

int strip_annotations(Document& doc) {
  int removed = 0;
  for (auto& s : doc.sentences) removed += strip_annotations(s);
  return removed;
}

}  // namespace ucxn
