#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chartrl {

// Closed token vocabulary of the chart language. Order is load-bearing:
// contiguous ranges are used for class tests and index arithmetic.
enum class Token : uint8_t {
  // structural framing
  BEGIN,
  ANSWER,
  CODE,
  END,
  SHOW,
  // statement keywords
  CHART,
  X,
  Y,
  AGG,
  TITLE,
  XLABEL,
  YLABEL,
  // chart types
  LINE,
  BAR,
  SCATTER,
  PIE,
  // aggregations
  SUM,
  MEAN,
  MAX,
  MIN,
  COUNT,
  // column references
  COL0,
  COL1,
  COL2,
  COL3,
  COL4,
  COL5,
  // title slots
  T0,
  T1,
  T2,
  T3,
  T4,
  T5,
  T6,
  T7,
  // answer-value tokens
  D0,
  D1,
  D2,
  D3,
  D4,
  D5,
  D6,
  D7,
  D8,
  D9,
  DOT,
  MINUS,
  CAT0,
  CAT1,
  CAT2,
  CAT3,
  CAT4,
  CAT5,
  CAT6,
  CAT7,
};

inline constexpr int kVocabSize = static_cast<int>(Token::CAT7) + 1;
inline constexpr int kMaxColumns = 6;
inline constexpr int kTitleSlots = 8;
inline constexpr int kCategoryPool = 8;

/// Fixed pool of category labels; cell values of categorical columns and the
/// CAT0..CAT7 answer tokens both draw from it.
std::span<const std::string_view> category_labels();

/// Fixed phrasebook the T0..T7 title slots resolve to.
std::span<const std::string_view> title_phrases();

std::string_view token_name(Token t);
std::optional<Token> token_from_name(std::string_view name);

inline bool is_chart_type(Token t) { return t >= Token::LINE && t <= Token::PIE; }
inline bool is_aggregation(Token t) { return t >= Token::SUM && t <= Token::COUNT; }
inline bool is_column_ref(Token t) { return t >= Token::COL0 && t <= Token::COL5; }
inline bool is_title_slot(Token t) { return t >= Token::T0 && t <= Token::T7; }
inline bool is_digit(Token t) { return t >= Token::D0 && t <= Token::D9; }
inline bool is_category_token(Token t) { return t >= Token::CAT0 && t <= Token::CAT7; }
inline bool is_answer_value(Token t) {
  return is_digit(t) || t == Token::DOT || t == Token::MINUS || is_category_token(t);
}

inline int column_index(Token t) { return static_cast<int>(t) - static_cast<int>(Token::COL0); }
inline int title_index(Token t) { return static_cast<int>(t) - static_cast<int>(Token::T0); }
inline int category_index(Token t) { return static_cast<int>(t) - static_cast<int>(Token::CAT0); }
inline int digit_value(Token t) { return static_cast<int>(t) - static_cast<int>(Token::D0); }

inline Token column_token(int idx) { return static_cast<Token>(static_cast<int>(Token::COL0) + idx); }
inline Token title_token(int idx) { return static_cast<Token>(static_cast<int>(Token::T0) + idx); }
inline Token category_token(int idx) { return static_cast<Token>(static_cast<int>(Token::CAT0) + idx); }
inline Token digit_token(int d) { return static_cast<Token>(static_cast<int>(Token::D0) + d); }

/// Space-separated uppercase names, e.g. "CHART BAR X COL0 Y COL1 SHOW".
std::string tokens_to_string(std::span<const Token> tokens);

/// Inverse of tokens_to_string. Throws std::runtime_error on an unknown name.
std::vector<Token> tokens_from_string(std::string_view text);

/// Literal text an answer-value token contributes to the decoded answer:
/// digits, ".", "-", or a category label. Empty for non-answer tokens.
std::string_view answer_token_text(Token t);

/// Concatenated text of a span of answer-value tokens.
std::string decode_answer(std::span<const Token> tokens);

}  // namespace chartrl
