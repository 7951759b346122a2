#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chartrl/dsl.hpp"
#include "chartrl/table.hpp"
#include "chartrl/vocab.hpp"

namespace chartrl {

enum class TemplateId { AGG_SCALAR, ARGMAX_CAT, ARGMIN_CAT, GROUP_BAR, TREND_LINE, SHARE_PIE };
enum class AnswerKind { NUMERIC, CATEGORICAL };

inline constexpr int kTemplateCount = 6;

struct QueryTemplate {
  TemplateId id;
  std::string_view text_pattern;  // placeholders {x}, {y}, {agg}
  AnswerKind answer_kind;
};

std::span<const QueryTemplate> query_templates();
std::string_view template_name(TemplateId id);
std::optional<TemplateId> template_from_name(std::string_view name);
AnswerKind answer_kind_of(TemplateId id);

/// One unit of training/eval data: a table, a rendered query, the gold
/// answer, the gold chart intent, and a reference program that realizes it.
struct TaskInstance {
  int64_t task_id = 0;
  TemplateId template_id = TemplateId::AGG_SCALAR;
  Table table;
  std::string query;
  std::string gold_answer;
  Intent gold_intent;
  std::vector<Token> reference_program;

  bool operator==(const TaskInstance&) const = default;
};

/// Deterministic synthetic table: 3-6 columns with at least one categorical
/// and two numeric (the first numeric column is non-negative), 5-20 rows.
/// Bounds outside [3, 6] are clamped.
Table generate_table(uint64_t seed, int min_cols = 3, int max_cols = 6);

/// Deterministic task for (seed, template). The gold answer is computed by a
/// direct pass over the generated table; the reference program realizes the
/// gold intent with title and axis labels.
TaskInstance generate_task(uint64_t seed, TemplateId tmpl);

/// `count` tasks with ids 0..count-1, templates drawn from `weights`
/// (uniform when empty) on a stream derived from base_seed.
std::vector<TaskInstance> make_dataset(uint64_t base_seed, int count,
                                       std::span<const double> weights = {});

/// Serializes the gold answer as tokens: digits/DOT/MINUS for numeric
/// answers, a CAT token for categorical ones.
std::vector<Token> answer_to_tokens(const std::string& answer, AnswerKind kind);

/// Full reference completion: BEGIN ANSWER <answer> CODE <program> END.
std::vector<Token> reference_output(const TaskInstance& task);

/// Numeric answers carry at most 4 significant digits; values below 1e-4 in
/// magnitude collapse to "0".
std::string format_answer_number(double v);

/// Line-delimited dataset file, one task per line, fixed field order.
/// Lossless round trip. Read errors name the offending line.
void write_dataset(std::span<const TaskInstance> tasks, const std::string& path);
std::vector<TaskInstance> read_dataset(const std::string& path);

}  // namespace chartrl
