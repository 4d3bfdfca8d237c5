#include "ucxn/matcher.hpp"

#include <algorithm>
#include <optional>

namespace ucxn {

namespace {

// form/lemma/upos/xpos read their columns ("_" and "" mean absent, matching
// CoNLL-U's unspecified-value convention); anything else is a FEATS lookup.
std::optional<std::string_view> attribute_value(const Token& token,
                                                std::string_view attr) {
  const std::string* column = nullptr;
  if (attr == "form")
    column = &token.form;
  else if (attr == "lemma")
    column = &token.lemma;
  else if (attr == "upos")
    column = &token.upos;
  else if (attr == "xpos")
    column = &token.xpos;
  if (column) {
    if (*column == "_" || column->empty()) return std::nullopt;
    return std::string_view(*column);
  }
  if (const std::string* v = token.feat(attr)) return std::string_view(*v);
  return std::nullopt;
}

bool clause_holds(const Token& token, const FeatureClause& clause) {
  auto value = attribute_value(token, clause.attribute);
  switch (clause.op) {
    case FeatureOp::Present:
      return value.has_value();
    case FeatureOp::Equals:
      if (!value) return false;
      return std::find(clause.values.begin(), clause.values.end(), *value) !=
             clause.values.end();
    case FeatureOp::NotEquals:
      if (!value) return true;
      return std::find(clause.values.begin(), clause.values.end(), *value) ==
             clause.values.end();
  }
  return false;
}

bool node_holds(const Sentence& s, int id, const NodePattern& node) {
  const Token& t = *s.word(id);
  for (const auto& clause : node.clauses)
    if (!clause_holds(t, clause)) return false;
  return true;
}

bool edge_holds(const Sentence& s, int source, int target,
                const EdgePattern& edge) {
  if (s.tree.head[target] != source) return false;
  const Token& t = *s.word(target);
  for (const auto& label : edge.labels)
    if (label.matches(t.deprel)) return true;
  return false;
}

bool order_holds(const OrderConstraint& order, int left, int right) {
  return order.kind == OrderKind::Immediate ? right == left + 1 : left < right;
}

bool equality_holds(const Sentence& s, const EqualityConstraint& eq, int left,
                    int right) {
  auto lv = attribute_value(*s.word(left), eq.left.attribute);
  auto rv = attribute_value(*s.word(right), eq.right.attribute);
  return lv && rv && *lv == *rv;
}

// Backtracking search over one clause. Nodes already fixed from outside
// (the positive binding, for `without` clauses) are seeded via `bound`.
// The next node to bind is always the one with the fewest live candidates;
// binding a node prunes its edge neighbors' candidate sets.
class ClauseSearch {
 public:
  ClauseSearch(const Sentence& s, const PatternClause& clause)
      : s_(s), clause_(clause), n_(static_cast<int>(clause.nodes.size())) {
    bound_.assign(n_, 0);
    candidates_.resize(n_);
    used_.assign(s_.word_count() + 1, false);
  }

  int node_index(std::string_view name) const {
    for (int i = 0; i < n_; ++i)
      if (clause_.nodes[i].name == name) return i;
    throw std::logic_error("internal error: unbound node reference '" +
                           std::string(name) + "'");
  }

  // Pre-binds a node to a fixed token. Returns false when the token cannot
  // satisfy the node's own constraints (the clause is then unsatisfiable).
  bool seed(int node, int id) {
    if (!node_holds(s_, id, clause_.nodes[node])) return false;
    if (used_[id]) return false;
    bound_[node] = id;
    used_[id] = true;
    return true;
  }

  // Runs the search. With `first_only`, stops at the first full solution;
  // returns whether any solution exists. Otherwise collects every solution
  // through `sink`.
  template <typename Sink>
  bool run(bool first_only, Sink&& sink) {
    for (int i = 0; i < n_; ++i) {
      if (bound_[i]) continue;
      candidates_[i].clear();
      for (int id = 1; id <= s_.word_count(); ++id)
        if (node_holds(s_, id, clause_.nodes[i])) candidates_[i].push_back(id);
    }
    // Constraints among pre-bound nodes are not revisited inside the
    // search loop, so settle them once up front.
    if (!fixed_constraints_hold()) return false;
    return extend(first_only, sink);
  }

  const std::vector<int>& bound() const { return bound_; }

 private:
  bool fixed_constraints_hold() const {
    for (const auto& e : clause_.edges) {
      int si = node_index(e.source), ti = node_index(e.target);
      if (bound_[si] && bound_[ti] && !edge_holds(s_, bound_[si], bound_[ti], e))
        return false;
    }
    for (const auto& o : clause_.orders) {
      int li = node_index(o.left), ri = node_index(o.right);
      if (bound_[li] && bound_[ri] && !order_holds(o, bound_[li], bound_[ri]))
        return false;
    }
    for (const auto& q : clause_.equalities) {
      int li = node_index(q.left.node), ri = node_index(q.right.node);
      if (bound_[li] && bound_[ri] &&
          !equality_holds(s_, q, bound_[li], bound_[ri]))
        return false;
    }
    return true;
  }

  // Candidates of `node` that are consistent with everything bound so far.
  void live_candidates(int node, std::vector<int>& out) const {
    out.clear();
    for (int id : candidates_[node]) {
      if (used_[id]) continue;
      if (consistent(node, id)) out.push_back(id);
    }
  }

  bool consistent(int node, int id) const {
    const std::string& name = clause_.nodes[node].name;
    for (const auto& e : clause_.edges) {
      if (e.source == name) {
        int ti = node_index(e.target);
        if (bound_[ti] && !edge_holds(s_, id, bound_[ti], e)) return false;
      }
      if (e.target == name) {
        int si = node_index(e.source);
        if (bound_[si] && !edge_holds(s_, bound_[si], id, e)) return false;
      }
    }
    for (const auto& o : clause_.orders) {
      if (o.left == name) {
        int ri = node_index(o.right);
        if (bound_[ri] && !order_holds(o, id, bound_[ri])) return false;
      }
      if (o.right == name) {
        int li = node_index(o.left);
        if (bound_[li] && !order_holds(o, bound_[li], id)) return false;
      }
    }
    for (const auto& q : clause_.equalities) {
      if (q.left.node == name) {
        int ri = node_index(q.right.node);
        if (bound_[ri] && !equality_holds(s_, q, id, bound_[ri])) return false;
      }
      if (q.right.node == name) {
        int li = node_index(q.left.node);
        if (bound_[li] && !equality_holds(s_, q, bound_[li], id)) return false;
      }
    }
    return true;
  }

  template <typename Sink>
  bool extend(bool first_only, Sink&& sink) {
    int best = -1;
    size_t best_count = 0;
    std::vector<int> best_live;
    std::vector<int> live;
    for (int i = 0; i < n_; ++i) {
      if (bound_[i]) continue;
      live_candidates(i, live);
      if (best == -1 || live.size() < best_count) {
        best = i;
        best_count = live.size();
        best_live = live;
        if (best_count == 0) return false;
      }
    }
    if (best == -1) {
      sink(bound_);
      return true;
    }
    bool any = false;
    for (int id : best_live) {
      bound_[best] = id;
      used_[id] = true;
      if (extend(first_only, sink)) {
        any = true;
        if (first_only) {
          bound_[best] = 0;
          used_[id] = false;
          return true;
        }
      }
      bound_[best] = 0;
      used_[id] = false;
    }
    return any;
  }

  const Sentence& s_;
  const PatternClause& clause_;
  int n_;
  std::vector<int> bound_;
  std::vector<std::vector<int>> candidates_;
  std::vector<bool> used_;
};

// A `without` clause kills the match iff some extension of the positive
// binding satisfies it. Shared names stay fixed; new names bind injectively
// among themselves and against the retained shared tokens.
bool without_triggers(const Sentence& s, const PatternClause& clause,
                      const Query& query, const std::vector<int>& positive_ids) {
  ClauseSearch search(s, clause);
  for (int i = 0; i < static_cast<int>(clause.nodes.size()); ++i) {
    const std::string& name = clause.nodes[i].name;
    for (size_t p = 0; p < query.positive.nodes.size(); ++p) {
      if (query.positive.nodes[p].name == name) {
        if (!search.seed(i, positive_ids[p])) return false;
        break;
      }
    }
  }
  return search.run(/*first_only=*/true, [](const std::vector<int>&) {});
}

}  // namespace

std::vector<Binding> match_sentence(const Query& query, const Sentence& sentence) {
  std::vector<Binding> results;
  if (!sentence.tree.ok) return results;

  ClauseSearch search(sentence, query.positive);
  std::vector<std::vector<int>> solutions;
  search.run(/*first_only=*/false, [&](const std::vector<int>& ids) {
    for (const auto& w : query.withouts)
      if (without_triggers(sentence, w, query, ids)) return;
    solutions.push_back(ids);
  });

  std::sort(solutions.begin(), solutions.end());
  results.reserve(solutions.size());
  for (const auto& ids : solutions) {
    Binding b;
    for (size_t i = 0; i < query.positive.nodes.size(); ++i)
      b.assignment.emplace_back(query.positive.nodes[i].name, ids[i]);
    results.push_back(std::move(b));
  }
  return results;
}

std::vector<MatchResult> match_document(const Query& query, const Document& doc,
                                        int* skipped) {
  std::vector<MatchResult> results;
  int skip_count = 0;
  for (size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    if (!s.tree.ok) {
      ++skip_count;
      continue;
    }
    std::string id = s.sent_id();
    if (id.empty()) id = std::to_string(i + 1);
    for (auto& b : match_sentence(query, s))
      results.push_back({id, query.name, std::move(b)});
  }
  if (skipped) *skipped = skip_count;
  return results;
}

}  // namespace ucxn
