#include "ucxn/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace ucxn {

namespace {

std::vector<std::string_view> split_values(std::string_view joined) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    auto plus = joined.find('+', start);
    if (plus == std::string_view::npos) {
      out.push_back(joined.substr(start));
      return out;
    }
    out.push_back(joined.substr(start, plus - start));
    start = plus + 1;
  }
}

std::string_view first_segment(std::string_view name) {
  auto dash = name.find('-');
  return dash == std::string_view::npos ? name : name.substr(0, dash);
}

int bucket_of(std::string_view deprel_base) {
  for (size_t i = 0; i + 1 < kWhBuckets.size(); ++i)
    if (kWhBuckets[i] == deprel_base) return static_cast<int>(i);
  return static_cast<int>(kWhBuckets.size()) - 1;  // other
}

}  // namespace

void add_to_counts(CountTable& table, const Sentence& sentence) {
  ++table.sentences;
  for (const auto& t : sentence.tokens) {
    if (!t.is_word()) continue;
    ++table.tokens;
    if (auto joined = t.misc_value("Cxn"))
      for (auto value : split_values(*joined))
        if (!value.empty()) ++table.rows[std::string(value)];
  }
}

CountTable count_constructions(const Document& doc) {
  CountTable table;
  for (const auto& s : doc.sentences) add_to_counts(table, s);
  return table;
}

void add_to_wh_report(WhPositionTable& table, const Sentence& sentence,
                      const WhReportOptions& options) {
  if (!sentence.tree.ok) return;
  int n = sentence.word_count();

  // Tokens inside the yield of any clause head carrying an Interrogative
  // Cxn value (the head itself included).
  std::vector<bool> in_interrogative(n + 1, false);
  for (int id = 1; id <= n; ++id) {
    const Token& t = *sentence.word(id);
    auto joined = t.misc_value("Cxn");
    if (!joined) continue;
    bool interrogative = false;
    for (auto value : split_values(*joined))
      if (first_segment(value) == "Interrogative") interrogative = true;
    if (!interrogative) continue;
    std::vector<int> stack = {id};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (in_interrogative[cur]) continue;
      in_interrogative[cur] = true;
      for (int child : sentence.tree.children[cur]) stack.push_back(child);
    }
  }

  for (int id = 1; id <= n; ++id) {
    const Token& t = *sentence.word(id);
    const std::string* prontype = t.feat("PronType");
    bool is_int = prontype && *prontype == "Int";
    bool in_baseline =
        std::find(options.baseline_upos.begin(), options.baseline_upos.end(),
                  t.upos) != options.baseline_upos.end();
    if (!in_baseline && !is_int) continue;
    int head = sentence.tree.head[id];
    if (head == 0) continue;  // nothing to compare against
    bool interrogative = is_int && in_interrogative[id];
    WhPositionCell& cell =
        table.cell(bucket_of(t.deprel_base()), interrogative);
    if (id < head)
      ++cell.pre;
    else
      ++cell.post;
  }
}

WhPositionTable wh_position_report(const Document& doc,
                                   const WhReportOptions& options) {
  WhPositionTable table;
  for (const auto& s : doc.sentences) add_to_wh_report(table, s, options);
  return table;
}

std::string emit_table(const CountTable& table, TableFormat format) {
  std::string out;
  if (format == TableFormat::Tsv) {
    out += "construction\tcount\n";
    for (const auto& [name, count] : table.rows)
      out += name + "\t" + std::to_string(count) + "\n";
    return out;
  }
  for (const auto& [name, count] : table.rows) {
    nlohmann::json record{{"construction", name}, {"count", count}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::string emit_table(const WhPositionTable& table, TableFormat format) {
  std::string out;
  if (format == TableFormat::Tsv) out += "deprel\tclass\tpre\tpost\n";
  for (size_t b = 0; b < kWhBuckets.size(); ++b) {
    for (int cls = 0; cls < 2; ++cls) {
      const WhPositionCell& cell = table.cells[b][cls];
      const char* label = cls ? "interrogative" : "non-interrogative";
      if (format == TableFormat::Tsv) {
        out += std::string(kWhBuckets[b]) + "\t" + label + "\t" +
               std::to_string(cell.pre) + "\t" + std::to_string(cell.post) +
               "\n";
      } else {
        nlohmann::json record{{"deprel", std::string(kWhBuckets[b])},
                              {"class", label},
                              {"pre", cell.pre},
                              {"post", cell.post}};
        out += record.dump();
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace ucxn
