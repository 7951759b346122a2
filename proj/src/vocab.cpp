#include "chartrl/vocab.hpp"

#include <stdexcept>

namespace chartrl {

namespace {

constexpr std::array<std::string_view, kVocabSize> kNames = {
    "BEGIN", "ANSWER", "CODE",   "END",    "SHOW",   "CHART", "X",    "Y",    "AGG",  "TITLE",
    "XLABEL", "YLABEL", "LINE",  "BAR",    "SCATTER", "PIE",  "SUM",  "MEAN", "MAX",  "MIN",
    "COUNT", "COL0",   "COL1",   "COL2",   "COL3",   "COL4",  "COL5", "T0",   "T1",   "T2",
    "T3",    "T4",     "T5",     "T6",     "T7",     "D0",    "D1",   "D2",   "D3",   "D4",
    "D5",    "D6",     "D7",     "D8",     "D9",     "DOT",   "MINUS", "CAT0", "CAT1", "CAT2",
    "CAT3",  "CAT4",   "CAT5",   "CAT6",   "CAT7",
};

constexpr std::array<std::string_view, kCategoryPool> kLabels = {
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
};

constexpr std::array<std::string_view, kTitleSlots> kTitles = {
    "Value distribution",
    "Top category comparison",
    "Bottom category comparison",
    "Totals by category",
    "Trend over time",
    "Share of total",
    "Category breakdown",
    "Data overview",
};

constexpr std::array<std::string_view, 10> kDigitText = {"0", "1", "2", "3", "4",
                                                         "5", "6", "7", "8", "9"};

}  // namespace

std::span<const std::string_view> category_labels() { return kLabels; }
std::span<const std::string_view> title_phrases() { return kTitles; }

std::string_view token_name(Token t) { return kNames[static_cast<size_t>(t)]; }

std::optional<Token> token_from_name(std::string_view name) {
  for (int i = 0; i < kVocabSize; ++i) {
    if (kNames[static_cast<size_t>(i)] == name) return static_cast<Token>(i);
  }
  return std::nullopt;
}

std::string tokens_to_string(std::span<const Token> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += token_name(tokens[i]);
  }
  return out;
}

std::vector<Token> tokens_from_string(std::string_view text) {
  std::vector<Token> out;
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view word = text.substr(pos, end - pos);
    auto tok = token_from_name(word);
    if (!tok) throw std::runtime_error("unknown token '" + std::string(word) + "'");
    out.push_back(*tok);
    pos = end;
  }
  return out;
}

std::string_view answer_token_text(Token t) {
  if (is_digit(t)) return kDigitText[static_cast<size_t>(digit_value(t))];
  if (t == Token::DOT) return ".";
  if (t == Token::MINUS) return "-";
  if (is_category_token(t)) return kLabels[static_cast<size_t>(category_index(t))];
  return "";
}

std::string decode_answer(std::span<const Token> tokens) {
  std::string out;
  for (Token t : tokens) out += answer_token_text(t);
  return out;
}

}  // namespace chartrl
