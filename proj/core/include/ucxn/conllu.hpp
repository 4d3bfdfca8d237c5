#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucxn {

/// Thrown on malformed CoNLL-U input in strict mode. `line` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class ParseMode { Strict, Lenient };

/// Row identifier from column 1: a word id, a multiword range "a-b",
/// an empty node "a.b", or a raw passthrough line kept only for output.
struct TokenId {
  enum class Kind { Word, Range, Empty, Raw };
  Kind kind = Kind::Word;
  int major = 0;  // word id / range start / empty-node base
  int minor = 0;  // range end / empty-node index

  friend bool operator==(const TokenId&, const TokenId&) = default;
};

struct Token {
  TokenId id;
  std::string id_raw;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::string feats_raw;
  // Parsed (name, value) pairs from FEATS, in column order; empty for "_".
  std::vector<std::pair<std::string, std::string>> feats;
  int head = -1;  // parsed for word rows; 0 = root; -1 = unavailable
  std::string head_raw;
  std::string deprel;
  std::string deps;
  // MISC split on '|', chunks kept verbatim; empty vector stands for "_".
  std::vector<std::string> misc;
  // Non-empty: the whole line is emitted verbatim and the row is invisible
  // to the tree and to matching (lenient salvage, displaced comments).
  std::string raw;

  bool is_word() const { return raw.empty() && id.kind == TokenId::Kind::Word; }

  /// Value of a FEATS entry, or nullptr if absent.
  const std::string* feat(std::string_view name) const;
  /// Value of a `Key=Value` MISC chunk, if present.
  std::optional<std::string_view> misc_value(std::string_view key) const;

  /// deprel text before the first ':'.
  std::string_view deprel_base() const;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Issue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int token_id = 0;  // 0 = sentence-level
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

/// Derived index over the syntactic words of one sentence. Valid (`ok`)
/// only when word ids are 1..n, every head resolves, there is exactly one
/// root and no cycles.
struct TreeIndex {
  bool ok = false;
  int root = 0;
  std::vector<int> head;                    // [1..n]; head[0] unused
  std::vector<std::vector<int>> children;   // children[0] = root list
  std::vector<int> depth;                   // depth[root] == 0
  std::vector<int> token_index;             // word id -> index into tokens

  int word_count() const {
    return head.empty() ? 0 : static_cast<int>(head.size()) - 1;
  }

  friend bool operator==(const TreeIndex&, const TreeIndex&) = default;
};

struct Sentence {
  std::vector<std::string> comments;  // verbatim lines, '#' included
  std::vector<Token> tokens;          // all rows in order
  int blank_lines_after = 1;
  std::vector<Issue> issues;          // recorded during lenient parsing
  TreeIndex tree;

  /// Value of the `# sent_id = ...` comment, or "" if absent.
  std::string sent_id() const;

  const Token* word(int id) const;
  Token* word(int id);
  int word_count() const { return tree.word_count(); }

  friend bool operator==(const Sentence& a, const Sentence& b) {
    return a.comments == b.comments && a.tokens == b.tokens &&
           a.blank_lines_after == b.blank_lines_after;
  }
};

struct Document {
  int leading_blank_lines = 0;
  bool final_newline = true;
  std::vector<Sentence> sentences;

  friend bool operator==(const Document& a, const Document& b) {
    return a.leading_blank_lines == b.leading_blank_lines &&
           a.final_newline == b.final_newline && a.sentences == b.sentences;
  }
};

/// Rebuild `sentence.tree` and return all structural issues found
/// (multiple roots, cycles, out-of-range heads, id gaps, ...).
std::vector<Issue> analyze_tree(Sentence& sentence);

/// Structural invariant check; empty result iff the sentence invariants hold.
std::vector<Issue> validate(const Sentence& sentence);

/// Number of head links from word `id` up to the root.
/// Throws std::out_of_range for an unknown id, std::logic_error if the
/// sentence has no usable tree.
int token_depth(const Sentence& sentence, int id);

Document parse_document(std::string_view text, ParseMode mode = ParseMode::Strict);
std::string serialize_document(const Document& doc);
std::string serialize_sentence(const Sentence& sentence);

/// Pull-based reader: one sentence at a time, preserving blank-line
/// structure, so arbitrarily large files stream in constant memory.
class DocumentReader {
 public:
  DocumentReader(std::istream& in, ParseMode mode = ParseMode::Strict);
  ~DocumentReader();
  DocumentReader(const DocumentReader&) = delete;
  DocumentReader& operator=(const DocumentReader&) = delete;

  std::optional<Sentence> next();
  int leading_blank_lines() const;
  /// Meaningful once next() has returned nullopt.
  bool final_newline() const;

 private:
  struct Impl;
  Impl* impl_;
};

/// Push-based writer mirroring DocumentReader; call finish() exactly once.
class DocumentWriter {
 public:
  explicit DocumentWriter(std::ostream& out);
  void leading_blank_lines(int n);
  void write(const Sentence& sentence);
  void finish(bool final_newline);

 private:
  void put_line(std::string_view line);
  std::ostream& out_;
  std::string held_;
  bool have_held_ = false;
};

}  // namespace ucxn
