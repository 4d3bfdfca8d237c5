#include "ucxn/conllu.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

namespace ucxn {

namespace {

// Incremental line source; reports whether each line was '\n'-terminated
// so a missing final newline survives the round trip.
class LineSource {
 public:
  virtual ~LineSource() = default;
  // Returns false at end of input.
  virtual bool next(std::string& line, bool& terminated) = 0;
};

class StringLineSource final : public LineSource {
 public:
  explicit StringLineSource(std::string_view text) : text_(text) {}

  bool next(std::string& line, bool& terminated) override {
    if (pos_ >= text_.size()) return false;
    auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      line.assign(text_.substr(pos_));
      terminated = false;
      pos_ = text_.size();
    } else {
      line.assign(text_.substr(pos_, nl - pos_));
      terminated = true;
      pos_ = nl + 1;
    }
    return true;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}

  bool next(std::string& line, bool& terminated) override {
    line.clear();
    terminated = false;
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return false;
    while (c != std::istream::traits_type::eof()) {
      if (c == '\n') {
        terminated = true;
        break;
      }
      line.push_back(static_cast<char>(c));
      c = in_.get();
    }
    return true;
  }

 private:
  std::istream& in_;
};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

bool parse_int(std::string_view s, int& out) {
  if (!all_digits(s) || s.size() > 9) return false;
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  out = v;
  return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

// Parses column 1. Returns false if the text is not a valid id.
bool parse_token_id(std::string_view text, TokenId& id) {
  if (auto dash = text.find('-'); dash != std::string_view::npos) {
    int a, b;
    if (!parse_int(text.substr(0, dash), a) ||
        !parse_int(text.substr(dash + 1), b))
      return false;
    id = {TokenId::Kind::Range, a, b};
    return a >= 1 && b >= a;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int a, b;
    if (!parse_int(text.substr(0, dot), a) ||
        !parse_int(text.substr(dot + 1), b))
      return false;
    id = {TokenId::Kind::Empty, a, b};
    return b >= 1;
  }
  int v;
  if (!parse_int(text, v) || v < 1) return false;
  id = {TokenId::Kind::Word, v, 0};
  return true;
}

// Accumulates one sentence block. Strict mode throws ParseError; lenient
// mode records the problem as an Issue and keeps the line verbatim.
struct SentenceAssembler {
  ParseMode mode = ParseMode::Strict;
  Sentence sentence;
  std::vector<int> token_lines;  // source line of each entry in tokens
  bool saw_token = false;
  bool open = false;

  void reset() {
    sentence = Sentence{};
    sentence.blank_lines_after = 0;
    token_lines.clear();
    saw_token = false;
    open = false;
  }

  void fail(int line, const std::string& message, int token_id = 0) {
    if (mode == ParseMode::Strict) throw ParseError(line, message);
    sentence.issues.push_back({Issue::Severity::Error, token_id,
                               "line " + std::to_string(line) + ": " + message});
  }

  void push_raw(const std::string& line_text, int line_no) {
    Token t;
    t.id.kind = TokenId::Kind::Raw;
    t.raw = line_text;
    sentence.tokens.push_back(std::move(t));
    token_lines.push_back(line_no);
  }

  void add_comment(const std::string& line_text, int line_no) {
    open = true;
    if (saw_token) {
      // Comment below token rows: irregular, but kept in place verbatim.
      sentence.issues.push_back({Issue::Severity::Warning, 0,
                                 "line " + std::to_string(line_no) +
                                     ": comment after token rows"});
      push_raw(line_text, line_no);
      return;
    }
    sentence.comments.push_back(line_text);
  }

  void add_row(const std::string& line_text, int line_no) {
    open = true;
    saw_token = true;
    auto fields = split(line_text, '\t');
    if (fields.size() != 10) {
      fail(line_no, "expected 10 tab-separated fields, got " +
                        std::to_string(fields.size()));
      push_raw(line_text, line_no);
      return;
    }
    Token t;
    t.id_raw = std::string(fields[0]);
    if (!parse_token_id(fields[0], t.id)) {
      fail(line_no, "invalid token id '" + std::string(fields[0]) + "'");
      push_raw(line_text, line_no);
      return;
    }
    t.form = std::string(fields[1]);
    t.lemma = std::string(fields[2]);
    t.upos = std::string(fields[3]);
    t.xpos = std::string(fields[4]);
    t.feats_raw = std::string(fields[5]);
    if (t.feats_raw != "_" && !t.feats_raw.empty()) {
      for (auto chunk : split(fields[5], '|')) {
        auto eq = chunk.find('=');
        if (eq == std::string_view::npos)
          t.feats.emplace_back(std::string(chunk), std::string());
        else
          t.feats.emplace_back(std::string(chunk.substr(0, eq)),
                               std::string(chunk.substr(eq + 1)));
      }
    }
    t.head_raw = std::string(fields[6]);
    if (t.id.kind == TokenId::Kind::Word) {
      int h;
      if (parse_int(fields[6], h)) {
        t.head = h;
      } else {
        fail(line_no, "invalid head '" + std::string(fields[6]) + "'",
             t.id.major);
        push_raw(line_text, line_no);
        return;
      }
    }
    t.deprel = std::string(fields[7]);
    t.deps = std::string(fields[8]);
    if (fields[9] != "_") {
      for (auto chunk : split(fields[9], '|')) t.misc.emplace_back(chunk);
    }
    sentence.tokens.push_back(std::move(t));
    token_lines.push_back(line_no);
  }

  Sentence finish() {
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      const Token& a = sentence.tokens[i];
      if (!a.is_word()) continue;
      for (size_t j = 0; j < i; ++j) {
        const Token& b = sentence.tokens[j];
        if (b.is_word() && b.id == a.id) {
          fail(token_lines[i], "duplicate token id " + a.id_raw, a.id.major);
          j = i;  // report once per row
        }
      }
    }
    auto structural = analyze_tree(sentence);
    sentence.issues.insert(sentence.issues.end(), structural.begin(),
                           structural.end());
    Sentence out = std::move(sentence);
    reset();
    return out;
  }
};

// Drives a LineSource through the assembler; shared by parse_document and
// DocumentReader. Blank-line runs after a block are consumed eagerly so the
// emitted sentence carries its full separator count.
struct ParserCore {
  LineSource& src;
  SentenceAssembler assembler;
  int line_no = 0;
  int leading_blanks = 0;
  bool final_newline = true;
  bool pushed_back = false;
  std::string held_line;

  ParserCore(LineSource& s, ParseMode mode) : src(s) {
    assembler.mode = mode;
    assembler.reset();
  }

  bool read_line(std::string& line) {
    if (pushed_back) {
      line = held_line;
      pushed_back = false;
      return true;
    }
    bool terminated;
    if (!src.next(line, terminated)) return false;
    ++line_no;
    if (!terminated) final_newline = false;
    return true;
  }

  std::optional<Sentence> next() {
    std::string line;
    while (read_line(line)) {
      if (line.empty()) {
        if (assembler.open) {
          int blanks = 1;
          while (read_line(line)) {
            if (line.empty()) {
              ++blanks;
            } else {
              held_line = line;
              pushed_back = true;
              break;
            }
          }
          Sentence s = assembler.finish();
          s.blank_lines_after = blanks;
          return s;
        }
        ++leading_blanks;
        continue;
      }
      if (line[0] == '#')
        assembler.add_comment(line, line_no);
      else
        assembler.add_row(line, line_no);
    }
    if (assembler.open) {
      Sentence s = assembler.finish();
      s.blank_lines_after = 0;
      return s;
    }
    return std::nullopt;
  }
};

void append_token_line(std::string& out, const Token& t) {
  if (!t.raw.empty()) {
    out += t.raw;
    return;
  }
  out += t.id_raw;
  out += '\t';
  out += t.form;
  out += '\t';
  out += t.lemma;
  out += '\t';
  out += t.upos;
  out += '\t';
  out += t.xpos;
  out += '\t';
  out += t.feats_raw;
  out += '\t';
  out += t.head_raw;
  out += '\t';
  out += t.deprel;
  out += '\t';
  out += t.deps;
  out += '\t';
  if (t.misc.empty()) {
    out += '_';
  } else {
    for (size_t i = 0; i < t.misc.size(); ++i) {
      if (i) out += '|';
      out += t.misc[i];
    }
  }
}

}  // namespace

const std::string* Token::feat(std::string_view name) const {
  for (const auto& [k, v] : feats)
    if (k == name) return &v;
  return nullptr;
}

std::optional<std::string_view> Token::misc_value(std::string_view key) const {
  for (const auto& chunk : misc) {
    std::string_view view(chunk);
    auto eq = view.find('=');
    if (eq != std::string_view::npos && view.substr(0, eq) == key)
      return view.substr(eq + 1);
  }
  return std::nullopt;
}

std::string_view Token::deprel_base() const {
  auto colon = deprel.find(':');
  return colon == std::string::npos
             ? std::string_view(deprel)
             : std::string_view(deprel).substr(0, colon);
}

std::string Sentence::sent_id() const {
  for (const auto& c : comments) {
    std::string_view v(c);
    if (v.rfind("# sent_id", 0) != 0) continue;
    auto eq = v.find('=');
    if (eq == std::string_view::npos) continue;
    v.remove_prefix(eq + 1);
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
    return std::string(v);
  }
  return "";
}

const Token* Sentence::word(int id) const {
  if (id < 1 || id >= static_cast<int>(tree.token_index.size())) return nullptr;
  int idx = tree.token_index[id];
  return idx < 0 ? nullptr : &tokens[idx];
}

Token* Sentence::word(int id) {
  return const_cast<Token*>(static_cast<const Sentence*>(this)->word(id));
}

std::vector<Issue> analyze_tree(Sentence& sentence) {
  std::vector<Issue> issues;
  sentence.tree = TreeIndex{};
  TreeIndex& tree = sentence.tree;

  std::vector<int> word_token_idx;
  int max_id = 0;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& t = sentence.tokens[i];
    if (t.is_word()) {
      word_token_idx.push_back(static_cast<int>(i));
      max_id = std::max(max_id, t.id.major);
    }
  }
  int n = static_cast<int>(word_token_idx.size());
  if (n == 0) {
    issues.push_back(
        {Issue::Severity::Error, 0, "sentence has no syntactic words"});
    return issues;
  }

  tree.token_index.assign(max_id + 1, -1);
  bool ids_ok = true;
  for (int idx : word_token_idx) {
    int id = sentence.tokens[idx].id.major;
    if (tree.token_index[id] != -1) {
      issues.push_back({Issue::Severity::Error, id,
                        "duplicate token id " + std::to_string(id)});
      ids_ok = false;
    } else {
      tree.token_index[id] = idx;
    }
  }
  if (max_id != n && ids_ok) {
    issues.push_back({Issue::Severity::Error, 0,
                      "word ids are not contiguous 1.." + std::to_string(n)});
    ids_ok = false;
  }
  if (!ids_ok) return issues;

  tree.head.assign(n + 1, -1);
  bool heads_ok = true;
  int roots = 0;
  for (int id = 1; id <= n; ++id) {
    const Token& t = sentence.tokens[tree.token_index[id]];
    if (t.head < 0) {
      issues.push_back({Issue::Severity::Error, id, "missing head"});
      heads_ok = false;
      continue;
    }
    if (t.head > n) {
      issues.push_back({Issue::Severity::Error, id,
                        "head " + std::to_string(t.head) + " out of range"});
      heads_ok = false;
      continue;
    }
    if (t.head == id) {
      issues.push_back({Issue::Severity::Error, id,
                        "self-loop/cycle at " + std::to_string(id)});
      heads_ok = false;
      continue;
    }
    tree.head[id] = t.head;
    if (t.head == 0) {
      ++roots;
      tree.root = id;
    }
  }
  if (roots == 0 && heads_ok) {
    issues.push_back(
        {Issue::Severity::Error, 0, "no root (no word with head 0)"});
    heads_ok = false;
  } else if (roots > 1) {
    issues.push_back({Issue::Severity::Error, 0, "multiple roots"});
    heads_ok = false;
  }
  if (!heads_ok) return issues;

  // Cycle check over head links.
  std::vector<int> state(n + 1, 0);  // 0 unseen, 1 on path, 2 done
  for (int start = 1; start <= n; ++start) {
    if (state[start] != 0) continue;
    std::vector<int> path;
    int cur = start;
    while (cur != 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = tree.head[cur];
    }
    if (cur != 0 && state[cur] == 1) {
      issues.push_back({Issue::Severity::Error, cur,
                        "self-loop/cycle at " + std::to_string(cur)});
      return issues;
    }
    for (int p : path) state[p] = 2;
  }

  tree.children.assign(n + 1, {});
  for (int id = 1; id <= n; ++id) tree.children[tree.head[id]].push_back(id);
  tree.depth.assign(n + 1, -1);
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    for (int child : tree.children[node]) {
      tree.depth[child] = node == 0 ? 0 : tree.depth[node] + 1;
      stack.push_back(child);
    }
  }
  tree.ok = true;
  return issues;
}

std::vector<Issue> validate(const Sentence& sentence) {
  Sentence copy = sentence;
  return analyze_tree(copy);
}

int token_depth(const Sentence& sentence, int id) {
  if (!sentence.tree.ok)
    throw std::logic_error("token_depth: sentence has no usable tree");
  if (id < 1 || id > sentence.tree.word_count())
    throw std::out_of_range("token_depth: unknown token id " +
                            std::to_string(id));
  return sentence.tree.depth[id];
}

Document parse_document(std::string_view text, ParseMode mode) {
  StringLineSource src(text);
  ParserCore core(src, mode);
  Document doc;
  while (auto s = core.next()) doc.sentences.push_back(std::move(*s));
  doc.leading_blank_lines = core.leading_blanks;
  doc.final_newline = core.final_newline;
  return doc;
}

std::string serialize_sentence(const Sentence& sentence) {
  std::string out;
  for (const auto& c : sentence.comments) {
    out += c;
    out += '\n';
  }
  for (const auto& t : sentence.tokens) {
    append_token_line(out, t);
    out += '\n';
  }
  for (int i = 0; i < sentence.blank_lines_after; ++i) out += '\n';
  return out;
}

std::string serialize_document(const Document& doc) {
  std::string out;
  for (int i = 0; i < doc.leading_blank_lines; ++i) out += '\n';
  for (const auto& s : doc.sentences) out += serialize_sentence(s);
  if (!doc.final_newline && !out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

struct DocumentReader::Impl {
  StreamLineSource src;
  ParserCore core;
  Impl(std::istream& in, ParseMode mode) : src(in), core(src, mode) {}
};

DocumentReader::DocumentReader(std::istream& in, ParseMode mode)
    : impl_(new Impl(in, mode)) {}

DocumentReader::~DocumentReader() { delete impl_; }

std::optional<Sentence> DocumentReader::next() { return impl_->core.next(); }

int DocumentReader::leading_blank_lines() const {
  return impl_->core.leading_blanks;
}

bool DocumentReader::final_newline() const { return impl_->core.final_newline; }

DocumentWriter::DocumentWriter(std::ostream& out) : out_(out) {}

void DocumentWriter::put_line(std::string_view line) {
  if (have_held_) out_ << held_ << '\n';
  held_.assign(line);
  have_held_ = true;
}

void DocumentWriter::leading_blank_lines(int n) {
  for (int i = 0; i < n; ++i) put_line("");
}

void DocumentWriter::write(const Sentence& sentence) {
  for (const auto& c : sentence.comments) put_line(c);
  std::string buf;
  for (const auto& t : sentence.tokens) {
    buf.clear();
    append_token_line(buf, t);
    put_line(buf);
  }
  for (int i = 0; i < sentence.blank_lines_after; ++i) put_line("");
}

void DocumentWriter::finish(bool final_newline) {
  if (have_held_) {
    out_ << held_;
    if (final_newline) out_ << '\n';
    have_held_ = false;
  }
  out_.flush();
}

}  // namespace ucxn
