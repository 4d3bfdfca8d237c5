#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucxn {

/// Thrown on malformed query source. Positions are 1-based.
class QueryError : public std::runtime_error {
 public:
  QueryError(int line, int column, const std::string& message)
      : std::runtime_error("query error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class FeatureOp { Equals, NotEquals, Present };

/// One constraint inside `NAME[...]`. `attribute` is form/lemma/upos/xpos
/// or any morphological feature name; values are a disjunction.
struct FeatureClause {
  std::string attribute;
  FeatureOp op = FeatureOp::Present;
  std::vector<std::string> values;

  friend bool operator==(const FeatureClause&, const FeatureClause&) = default;
};

struct NodePattern {
  std::string name;
  std::vector<FeatureClause> clauses;

  friend bool operator==(const NodePattern&, const NodePattern&) = default;
};

/// `text` is the full label ("obl:lmod") or, with `wildcard`, the base of
/// a `base:*` label that also matches every subtype.
struct LabelPattern {
  std::string text;
  bool wildcard = false;

  bool matches(std::string_view deprel) const {
    if (deprel == text) return true;
    return wildcard && deprel.size() > text.size() &&
           deprel[text.size()] == ':' &&
           deprel.substr(0, text.size()) == text;
  }

  friend bool operator==(const LabelPattern&, const LabelPattern&) = default;
};

struct EdgePattern {
  std::string source;
  std::string target;
  std::vector<LabelPattern> labels;

  friend bool operator==(const EdgePattern&, const EdgePattern&) = default;
};

enum class OrderKind { Immediate, Precedes };

struct OrderConstraint {
  std::string left;
  std::string right;
  OrderKind kind = OrderKind::Precedes;

  friend bool operator==(const OrderConstraint&, const OrderConstraint&) = default;
};

struct AttrRef {
  std::string node;
  std::string attribute;

  friend bool operator==(const AttrRef&, const AttrRef&) = default;
};

struct EqualityConstraint {
  AttrRef left;
  AttrRef right;

  friend bool operator==(const EqualityConstraint&, const EqualityConstraint&) = default;
};

struct PatternClause {
  std::vector<NodePattern> nodes;
  std::vector<EdgePattern> edges;
  std::vector<OrderConstraint> orders;
  std::vector<EqualityConstraint> equalities;

  const NodePattern* find_node(std::string_view name) const {
    for (const auto& n : nodes)
      if (n.name == name) return &n;
    return nullptr;
  }

  friend bool operator==(const PatternClause&, const PatternClause&) = default;
};

struct Query {
  std::string name;       // hierarchical, dash-separated segments
  std::string head_node;  // empty: head falls back to the placement rule
  // node name -> construction-element role, in declaration order
  std::vector<std::pair<std::string, std::string>> elements;
  PatternClause positive;
  std::vector<PatternClause> withouts;
  std::string note;  // comment block preceding the query in its file

  friend bool operator==(const Query& a, const Query& b) {
    return a.name == b.name && a.head_node == b.head_node &&
           a.elements == b.elements && a.positive == b.positive &&
           a.withouts == b.withouts;
  }
};

/// Parses a single query: either a full `cxn Name { ... }` block or a bare
/// `pattern { ... } without { ... }` sequence (anonymous query).
Query parse_query(std::string_view text);

/// Parses a file of `cxn` blocks; names must be unique within the file.
std::vector<Query> parse_query_file(std::string_view text);

/// Canonical concrete-syntax form; re-parsing it yields an equal Query.
std::string to_string(const Query& query);

}  // namespace ucxn
