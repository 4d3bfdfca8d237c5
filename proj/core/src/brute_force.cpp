// Reference matcher: dumb exhaustive enumeration, kept deliberately
// separate from the backtracking engine in matcher.cpp. It re-implements
// every piece of the match semantics (attribute lookup, label matching,
// edge/order/equality checks) so the two routes share no logic.

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "ucxn/matcher.hpp"

namespace ucxn {

namespace {

constexpr int kMaxWords = 14;

std::optional<std::string> bf_attribute(const Token& t, const std::string& attr) {
  std::string column;
  bool is_column = true;
  if (attr == "form")
    column = t.form;
  else if (attr == "lemma")
    column = t.lemma;
  else if (attr == "upos")
    column = t.upos;
  else if (attr == "xpos")
    column = t.xpos;
  else
    is_column = false;
  if (is_column) {
    if (column == "_" || column.empty()) return std::nullopt;
    return column;
  }
  for (const auto& [name, value] : t.feats)
    if (name == attr) return value;
  return std::nullopt;
}

bool bf_clause(const Token& t, const FeatureClause& c) {
  auto v = bf_attribute(t, c.attribute);
  if (c.op == FeatureOp::Present) return v.has_value();
  bool in_set = false;
  if (v)
    for (const auto& candidate : c.values)
      if (candidate == *v) in_set = true;
  if (c.op == FeatureOp::Equals) return v.has_value() && in_set;
  return !v.has_value() || !in_set;  // NotEquals
}

bool bf_label(const LabelPattern& label, const std::string& deprel) {
  if (deprel == label.text) return true;
  if (!label.wildcard) return false;
  return deprel.size() > label.text.size() &&
         deprel.compare(0, label.text.size(), label.text) == 0 &&
         deprel[label.text.size()] == ':';
}

// Word tokens by id, read off the rows directly (no TreeIndex involved).
std::vector<const Token*> bf_words(const Sentence& s) {
  int max_id = 0;
  for (const auto& t : s.tokens)
    if (t.raw.empty() && t.id.kind == TokenId::Kind::Word)
      max_id = std::max(max_id, t.id.major);
  std::vector<const Token*> by_id(max_id + 1, nullptr);
  for (const auto& t : s.tokens)
    if (t.raw.empty() && t.id.kind == TokenId::Kind::Word)
      by_id[t.id.major] = &t;
  return by_id;
}

struct BfContext {
  const std::vector<const Token*>& words;
  int word_count;
};

// Checks one clause under a complete assignment of its nodes.
bool bf_clause_satisfied(const BfContext& ctx, const PatternClause& clause,
                         const std::vector<int>& ids) {
  for (size_t i = 0; i < clause.nodes.size(); ++i)
    for (const auto& fc : clause.nodes[i].clauses)
      if (!bf_clause(*ctx.words[ids[i]], fc)) return false;
  auto index_of = [&](const std::string& name) {
    for (size_t i = 0; i < clause.nodes.size(); ++i)
      if (clause.nodes[i].name == name) return static_cast<int>(i);
    return -1;
  };
  for (const auto& e : clause.edges) {
    int src = ids[index_of(e.source)];
    int tgt = ids[index_of(e.target)];
    if (ctx.words[tgt]->head != src) return false;
    bool label_ok = false;
    for (const auto& l : e.labels)
      if (bf_label(l, ctx.words[tgt]->deprel)) label_ok = true;
    if (!label_ok) return false;
  }
  for (const auto& o : clause.orders) {
    int left = ids[index_of(o.left)];
    int right = ids[index_of(o.right)];
    if (o.kind == OrderKind::Immediate) {
      if (right != left + 1) return false;
    } else {
      if (!(left < right)) return false;
    }
  }
  for (const auto& q : clause.equalities) {
    auto lv = bf_attribute(*ctx.words[ids[index_of(q.left.node)]], q.left.attribute);
    auto rv = bf_attribute(*ctx.words[ids[index_of(q.right.node)]], q.right.attribute);
    if (!lv || !rv || *lv != *rv) return false;
  }
  return true;
}

// Enumerates all injective assignments of `slots` ids (positions already
// filled are skipped) and reports whether any satisfies the clause.
bool bf_exists(const BfContext& ctx, const PatternClause& clause,
               std::vector<int>& ids, size_t next) {
  if (next == ids.size()) return bf_clause_satisfied(ctx, clause, ids);
  if (ids[next] != 0) return bf_exists(ctx, clause, ids, next + 1);
  for (int id = 1; id <= ctx.word_count; ++id) {
    bool taken = false;
    for (size_t i = 0; i < ids.size(); ++i)
      if (i != next && ids[i] == id) taken = true;
    if (taken) continue;
    ids[next] = id;
    if (bf_exists(ctx, clause, ids, next + 1)) {
      ids[next] = 0;
      return true;
    }
    ids[next] = 0;
  }
  return false;
}

bool bf_without_triggers(const BfContext& ctx, const Query& query,
                         const PatternClause& clause,
                         const std::vector<int>& positive_ids) {
  std::vector<int> ids(clause.nodes.size(), 0);
  for (size_t i = 0; i < clause.nodes.size(); ++i) {
    for (size_t p = 0; p < query.positive.nodes.size(); ++p) {
      if (query.positive.nodes[p].name == clause.nodes[i].name) {
        ids[i] = positive_ids[p];
        break;
      }
    }
  }
  return bf_exists(ctx, clause, ids, 0);
}

void bf_enumerate(const BfContext& ctx, const Query& query,
                  std::vector<int>& ids, size_t next,
                  std::vector<std::vector<int>>& out) {
  if (next == ids.size()) {
    if (!bf_clause_satisfied(ctx, query.positive, ids)) return;
    for (const auto& w : query.withouts)
      if (bf_without_triggers(ctx, query, w, ids)) return;
    out.push_back(ids);
    return;
  }
  for (int id = 1; id <= ctx.word_count; ++id) {
    bool taken = false;
    for (size_t i = 0; i < next; ++i)
      if (ids[i] == id) taken = true;
    if (taken) continue;
    ids[next] = id;
    bf_enumerate(ctx, query, ids, next + 1, out);
  }
}

}  // namespace

std::vector<Binding> brute_force_match(const Query& query,
                                       const Sentence& sentence) {
  auto words = bf_words(sentence);
  int n = 0;
  for (size_t id = 1; id < words.size(); ++id)
    if (words[id]) ++n;
  if (n > kMaxWords)
    throw std::length_error("brute_force_match: sentence has " +
                            std::to_string(n) + " words (limit " +
                            std::to_string(kMaxWords) + ")");
  std::vector<Binding> results;
  if (!sentence.tree.ok) return results;
  // Contiguity holds whenever the tree is usable, so ids run 1..n.
  BfContext ctx{words, n};
  std::vector<int> ids(query.positive.nodes.size(), 0);
  std::vector<std::vector<int>> solutions;
  bf_enumerate(ctx, query, ids, 0, solutions);
  std::sort(solutions.begin(), solutions.end());
  for (const auto& sol : solutions) {
    Binding b;
    for (size_t i = 0; i < query.positive.nodes.size(); ++i)
      b.assignment.emplace_back(query.positive.nodes[i].name, sol[i]);
    results.push_back(std::move(b));
  }
  return results;
}

}  // namespace ucxn
