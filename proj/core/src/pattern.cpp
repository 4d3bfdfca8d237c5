#include "ucxn/pattern.hpp"

#include <cctype>

namespace ucxn {

namespace {

enum class Tok {
  Ident,
  String,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Pipe,
  Dot,
  Eq,
  Neq,        // <>
  Lt,         // <
  LtLt,       // <<
  EdgeOpen,   // -[
  EdgeClose,  // ]->
  Dash,
  Star,
  Colon,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
  std::string note;  // '#' comment lines directly preceding this token
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    std::string note;
    skip_space_and_comments(note);
    Token t;
    t.line = line_;
    t.col = col_;
    t.note = std::move(note);
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src_[pos_];
    if (ident_char(c)) {
      size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (c == '"') {
      advance();
      std::string value;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        char d = src_[pos_];
        if (d == '\\' && pos_ + 1 < src_.size()) {
          advance();
          d = src_[pos_];
        }
        value.push_back(d);
        advance();
      }
      if (pos_ >= src_.size()) fail(t, "unterminated string");
      advance();  // closing quote
      t.kind = Tok::String;
      t.text = std::move(value);
      return t;
    }
    switch (c) {
      case '{': advance(); t.kind = Tok::LBrace; return t;
      case '}': advance(); t.kind = Tok::RBrace; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']':
        advance();
        if (peek() == '-' && peek(1) == '>') {
          advance();
          advance();
          t.kind = Tok::EdgeClose;
        } else {
          t.kind = Tok::RBracket;
        }
        return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '|': advance(); t.kind = Tok::Pipe; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '=': advance(); t.kind = Tok::Eq; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case ':': advance(); t.kind = Tok::Colon; return t;
      case '-':
        advance();
        if (peek() == '[') {
          advance();
          t.kind = Tok::EdgeOpen;
        } else {
          t.kind = Tok::Dash;
        }
        return t;
      case '<':
        advance();
        if (peek() == '<') {
          advance();
          t.kind = Tok::LtLt;
        } else if (peek() == '>') {
          advance();
          t.kind = Tok::Neq;
        } else {
          t.kind = Tok::Lt;
        }
        return t;
      default:
        fail(t, std::string("unexpected character '") + c + "'");
    }
    return t;  // unreachable
  }

 private:
  char peek(int off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments(std::string& note) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' || c == '%') {
        size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        if (c == '#') {
          std::string_view body = src_.substr(start + 1, pos_ - start - 1);
          while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
          if (!note.empty()) note += '\n';
          note += std::string(body);
        }
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const Token& t, const std::string& message) {
    throw QueryError(t.line, t.col, message);
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Ref {
  std::string name;
  int line;
  int col;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  Query parse_single() {
    Query q = cur_.kind == Tok::Ident && cur_.text == "cxn" ? parse_cxn()
                                                            : parse_bare();
    expect(Tok::End, "end of input");
    return q;
  }

  std::vector<Query> parse_file() {
    std::vector<Query> queries;
    while (cur_.kind != Tok::End) {
      if (!(cur_.kind == Tok::Ident && cur_.text == "cxn"))
        fail("expected 'cxn'");
      queries.push_back(parse_cxn());
    }
    for (size_t i = 0; i < queries.size(); ++i)
      for (size_t j = 0; j < i; ++j)
        if (queries[i].name == queries[j].name)
          throw QueryError(1, 1, "duplicate query name '" + queries[i].name + "'");
    return queries;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) {
    throw QueryError(cur_.line, cur_.col, message);
  }

  Token expect(Tok kind, const std::string& what) {
    if (cur_.kind != kind) fail("expected " + what);
    Token t = cur_;
    shift();
    return t;
  }

  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    shift();
    return true;
  }

  bool at_keyword(std::string_view kw) const {
    return cur_.kind == Tok::Ident && cur_.text == kw;
  }

  std::string parse_dashed_name() {
    std::string name = expect(Tok::Ident, "name").text;
    while (accept(Tok::Dash)) name += "-" + expect(Tok::Ident, "name segment").text;
    return name;
  }

  Query parse_cxn() {
    Query q;
    q.note = cur_.note;
    shift();  // 'cxn'
    q.name = parse_dashed_name();
    expect(Tok::LBrace, "'{'");
    parse_body(q);
    expect(Tok::RBrace, "'}'");
    finalize(q);
    return q;
  }

  Query parse_bare() {
    Query q;
    parse_body(q);
    finalize(q);
    return q;
  }

  void parse_body(Query& q) {
    if (at_keyword("meta")) parse_meta(q);
    if (!at_keyword("pattern")) fail("expected 'pattern'");
    shift();
    parse_clause(q.positive, /*positive=*/true);
    while (at_keyword("without")) {
      shift();
      q.withouts.emplace_back();
      parse_clause(q.withouts.back(), /*positive=*/false);
    }
  }

  void parse_meta(Query& q) {
    shift();  // 'meta'
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      Token key = expect(Tok::Ident, "meta item");
      if (key.text == "name") {
        expect(Tok::Eq, "'='");
        q.name = parse_dashed_name();
      } else if (key.text == "head") {
        expect(Tok::Eq, "'='");
        Token node = expect(Tok::Ident, "node name");
        q.head_node = node.text;
        head_ref_ = {node.text, node.line, node.col};
      } else if (key.text == "elt") {
        Token node = expect(Tok::Ident, "node name");
        expect(Tok::Eq, "'='");
        std::string role = parse_dashed_name();
        for (const auto& [n, r] : q.elements) {
          if (n == node.text)
            throw QueryError(node.line, node.col,
                             "duplicate element for node '" + node.text + "'");
          if (r == role)
            throw QueryError(node.line, node.col,
                             "duplicate element role '" + role + "'");
        }
        q.elements.emplace_back(node.text, role);
        element_refs_.push_back({node.text, node.line, node.col});
      } else {
        throw QueryError(key.line, key.col,
                         "unknown meta item '" + key.text + "'");
      }
      expect(Tok::Semi, "';'");
    }
  }

  void parse_clause(PatternClause& clause, bool positive) {
    std::vector<Ref> refs;
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      Token head = expect(Tok::Ident, "pattern item");
      switch (cur_.kind) {
        case Tok::LBracket:
          parse_node(clause, head);
          break;
        case Tok::EdgeOpen:
          parse_edge(clause, head, refs);
          break;
        case Tok::Lt:
        case Tok::LtLt:
          parse_order(clause, head, refs);
          break;
        case Tok::Dot:
          parse_equality(clause, head, refs);
          break;
        default:
          fail("expected '[', '-[', '<', '<<' or '.' after node name");
      }
      expect(Tok::Semi, "';'");
    }
    if (positive) {
      positive_refs_ = std::move(refs);
    } else {
      without_refs_.push_back(std::move(refs));
    }
  }

  void parse_node(PatternClause& clause, const Token& name) {
    if (clause.find_node(name.text))
      throw QueryError(name.line, name.col,
                       "duplicate node name '" + name.text + "'");
    NodePattern node;
    node.name = name.text;
    shift();  // '['
    if (!accept(Tok::RBracket)) {
      do {
        FeatureClause fc;
        fc.attribute = expect(Tok::Ident, "attribute name").text;
        if (cur_.kind == Tok::Eq || cur_.kind == Tok::Neq) {
          fc.op = cur_.kind == Tok::Eq ? FeatureOp::Equals : FeatureOp::NotEquals;
          shift();
          fc.values.push_back(parse_value());
          while (accept(Tok::Pipe)) fc.values.push_back(parse_value());
        } else {
          fc.op = FeatureOp::Present;
        }
        node.clauses.push_back(std::move(fc));
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
    }
    clause.nodes.push_back(std::move(node));
  }

  std::string parse_value() {
    if (cur_.kind == Tok::Ident || cur_.kind == Tok::String) {
      std::string v = cur_.text;
      shift();
      return v;
    }
    fail("expected value");
  }

  void parse_edge(PatternClause& clause, const Token& source,
                  std::vector<Ref>& refs) {
    shift();  // '-['
    EdgePattern edge;
    edge.source = source.text;
    refs.push_back({source.text, source.line, source.col});
    edge.labels.push_back(parse_label());
    while (accept(Tok::Pipe)) edge.labels.push_back(parse_label());
    expect(Tok::EdgeClose, "']->'");
    Token target = expect(Tok::Ident, "target node");
    edge.target = target.text;
    refs.push_back({target.text, target.line, target.col});
    clause.edges.push_back(std::move(edge));
  }

  LabelPattern parse_label() {
    LabelPattern label;
    label.text = expect(Tok::Ident, "relation label").text;
    while (accept(Tok::Colon)) {
      if (accept(Tok::Star)) {
        label.wildcard = true;
        break;
      }
      label.text += ":" + expect(Tok::Ident, "relation subtype").text;
    }
    return label;
  }

  void parse_order(PatternClause& clause, const Token& left,
                   std::vector<Ref>& refs) {
    OrderConstraint order;
    order.kind = cur_.kind == Tok::Lt ? OrderKind::Immediate : OrderKind::Precedes;
    shift();
    order.left = left.text;
    refs.push_back({left.text, left.line, left.col});
    Token right = expect(Tok::Ident, "node name");
    order.right = right.text;
    refs.push_back({right.text, right.line, right.col});
    if (order.left == order.right)
      throw QueryError(left.line, left.col,
                       "order constraint relates node '" + order.left +
                           "' to itself");
    clause.orders.push_back(std::move(order));
  }

  void parse_equality(PatternClause& clause, const Token& left,
                      std::vector<Ref>& refs) {
    shift();  // '.'
    EqualityConstraint eq;
    eq.left.node = left.text;
    refs.push_back({left.text, left.line, left.col});
    eq.left.attribute = expect(Tok::Ident, "attribute").text;
    expect(Tok::Eq, "'='");
    Token rnode = expect(Tok::Ident, "node name");
    eq.right.node = rnode.text;
    refs.push_back({rnode.text, rnode.line, rnode.col});
    expect(Tok::Dot, "'.'");
    eq.right.attribute = expect(Tok::Ident, "attribute").text;
    clause.equalities.push_back(std::move(eq));
  }

  // Name resolution. A node referenced by an edge, order, or equality but
  // never declared with `NAME[...]` is implicitly declared as an
  // unconstrained node of its clause, in first-reference order (this is
  // how the published queries are written). `without` references resolve
  // against the clause first, then the positive pattern.
  void finalize(Query& q) {
    for (const auto& ref : positive_refs_)
      if (!q.positive.find_node(ref.name))
        q.positive.nodes.push_back(NodePattern{ref.name, {}});
    if (q.positive.nodes.empty())
      throw QueryError(1, 1, "empty positive pattern");
    for (size_t w = 0; w < q.withouts.size(); ++w) {
      PatternClause& clause = q.withouts[w];
      for (const auto& ref : without_refs_[w]) {
        if (clause.find_node(ref.name) || q.positive.find_node(ref.name))
          continue;
        clause.nodes.push_back(NodePattern{ref.name, {}});
      }
    }
    if (!q.head_node.empty() && !q.positive.find_node(q.head_node))
      throw QueryError(head_ref_.line, head_ref_.col,
                       "undeclared node " + q.head_node);
    for (const auto& ref : element_refs_)
      if (!q.positive.find_node(ref.name))
        throw QueryError(ref.line, ref.col, "undeclared node " + ref.name);
    positive_refs_.clear();
    without_refs_.clear();
    element_refs_.clear();
  }

  Lexer lexer_;
  Token cur_;
  std::vector<Ref> positive_refs_;
  std::vector<std::vector<Ref>> without_refs_;
  std::vector<Ref> element_refs_;
  Ref head_ref_{};
};

void print_value(std::string& out, const std::string& value) {
  out += '"';
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void print_clause(std::string& out, const PatternClause& clause,
                  const char* keyword) {
  out += "  ";
  out += keyword;
  out += " {\n";
  for (const auto& node : clause.nodes) {
    out += "    " + node.name + "[";
    for (size_t i = 0; i < node.clauses.size(); ++i) {
      if (i) out += ", ";
      const FeatureClause& fc = node.clauses[i];
      out += fc.attribute;
      if (fc.op != FeatureOp::Present) {
        out += fc.op == FeatureOp::Equals ? "=" : "<>";
        for (size_t v = 0; v < fc.values.size(); ++v) {
          if (v) out += "|";
          print_value(out, fc.values[v]);
        }
      }
    }
    out += "];\n";
  }
  for (const auto& edge : clause.edges) {
    out += "    " + edge.source + "-[";
    for (size_t i = 0; i < edge.labels.size(); ++i) {
      if (i) out += "|";
      out += edge.labels[i].text;
      if (edge.labels[i].wildcard) out += ":*";
    }
    out += "]->" + edge.target + ";\n";
  }
  for (const auto& order : clause.orders) {
    out += "    " + order.left +
           (order.kind == OrderKind::Immediate ? " < " : " << ") + order.right +
           ";\n";
  }
  for (const auto& eq : clause.equalities) {
    out += "    " + eq.left.node + "." + eq.left.attribute + " = " +
           eq.right.node + "." + eq.right.attribute + ";\n";
  }
  out += "  }\n";
}

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse_single(); }

std::vector<Query> parse_query_file(std::string_view text) {
  return Parser(text).parse_file();
}

std::string to_string(const Query& query) {
  std::string out;
  bool named = !query.name.empty();
  if (named) out += "cxn " + query.name + " {\n";
  if (!query.head_node.empty() || !query.elements.empty()) {
    out += "  meta { ";
    if (!query.head_node.empty()) out += "head=" + query.head_node + "; ";
    for (const auto& [node, role] : query.elements)
      out += "elt " + node + "=" + role + "; ";
    out += "}\n";
  }
  print_clause(out, query.positive, "pattern");
  for (const auto& w : query.withouts) print_clause(out, w, "without");
  if (named) out += "}\n";
  return out;
}

}  // namespace ucxn
