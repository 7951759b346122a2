#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chartrl/table.hpp"
#include "chartrl/vocab.hpp"

namespace chartrl {

enum class ChartType { LINE, BAR, SCATTER, PIE };
enum class AggKind { NONE, SUM, MEAN, MAX, MIN, COUNT };

std::string_view chart_type_name(ChartType t);
std::string_view agg_name(AggKind a);
std::optional<ChartType> chart_type_from_name(std::string_view);
std::optional<AggKind> agg_from_name(std::string_view);

ChartType chart_type_of(Token t);
AggKind agg_of(Token t);
Token chart_type_token(ChartType t);
Token agg_token(AggKind a);

/// (chart type, x column, y column, aggregation) — the tuple intent matching
/// compares.
struct Intent {
  ChartType chart = ChartType::BAR;
  int x_col = 0;
  int y_col = 0;
  AggKind agg = AggKind::NONE;

  bool operator==(const Intent&) const = default;
};

/// A successfully parsed program. x/y are required by the grammar; the rest
/// are optional clauses.
struct Program {
  ChartType chart = ChartType::BAR;
  int x_col = -1;
  int y_col = -1;
  std::optional<AggKind> agg;
  std::optional<int> title_slot;
  std::optional<int> xlabel_col;
  std::optional<int> ylabel_col;
  bool terminated = false;
};

/// Aggregation the interpreter actually applies: BAR/PIE default to SUM when
/// no AGG clause is given; LINE/SCATTER plot raw pairs and ignore AGG.
AggKind effective_agg(const Program& p);

/// Intent tuple of a parsed program, using the effective aggregation.
Intent program_intent(const Program& p);

enum class ErrorClass { SYNTAX, UNKNOWN_COLUMN, TYPE_MISMATCH, SHAPE_MISMATCH, VALUE_ERROR, LIMIT_EXCEEDED };

std::string_view error_class_name(ErrorClass c);

struct DslError {
  ErrorClass cls = ErrorClass::SYNTAX;
  std::string message;
  std::optional<int> token_position;
};

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(DslError err) : v_(std::move(err)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const DslError& error() const { return std::get<DslError>(v_); }

 private:
  std::variant<T, DslError> v_;
};

struct ChartPoint {
  std::variant<std::string, double> x;
  double y = 0.0;

  bool operator==(const ChartPoint&) const = default;
};

/// Post-execution chart description. Points are ordered: first-appearance
/// order for a categorical x axis, ascending for a numeric one.
struct ChartSpec {
  ChartType chart = ChartType::BAR;
  int x_col = 0;
  int y_col = 0;
  std::string x_field;
  std::string y_field;
  AggKind agg = AggKind::NONE;
  std::optional<std::string> title;
  std::optional<std::string> xlabel;
  std::optional<std::string> ylabel;
  std::vector<ChartPoint> points;
};

inline Intent spec_intent(const ChartSpec& s) { return Intent{s.chart, s.x_col, s.y_col, s.agg}; }

/// Accepts exactly:
///   CHART <type> X <col> Y <col> [AGG <agg>] [TITLE <slot>] [XLABEL <col>] [YLABEL <col>] SHOW
/// Clauses after CHART may come in any order, each at most once. Everything
/// else is a SYNTAX error carrying the first offending position.
Result<Program> parse(std::span<const Token> tokens);

/// Executes a parsed program against a table. BAR/PIE group rows by the x
/// column and aggregate y per group; LINE/SCATTER plot raw (x, y) pairs.
/// `steps` accumulates interpreter work for the sandbox's budget.
Result<ChartSpec> interpret(const Program& p, const Table& table, int max_steps, int max_points,
                            int& steps);

/// Convenience overload with generous default limits.
Result<ChartSpec> interpret(const Program& p, const Table& table);

}  // namespace chartrl
