#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chartrl/dsl.hpp"
#include "chartrl/sandbox.hpp"
#include "chartrl/taskgen.hpp"
#include "chartrl/vocab.hpp"

namespace chartrl {

/// The two spans of a well-formed completion, as split by the format check.
struct StructuredOutput {
  std::vector<Token> answer_tokens;
  std::vector<Token> program_tokens;
  std::string answer_text;
};

/// Structural gate: accepts exactly
///   BEGIN ANSWER <one or more answer-value tokens> CODE <program ending in SHOW> END
/// with END as the final token. Failure is a normal return.
std::optional<StructuredOutput> format_check(std::span<const Token> tokens);

/// Component weights of the composite reward; must sum to 1.
struct RewardWeights {
  double alpha = 0.50;  // text
  double beta = 0.25;   // code
  double gamma = 0.25;  // vis

  bool valid() const {
    return alpha >= 0 && beta >= 0 && gamma >= 0 && alpha <= 1 && beta <= 1 && gamma <= 1 &&
           std::fabs(alpha + beta + gamma - 1.0) <= 1e-12;
  }
};

/// Every scored component of one completion. When the format gate fails,
/// all components and the total are zero.
struct RewardBreakdown {
  bool format_ok = false;
  double text_score = 0.0;        // [0,1]
  int exec_ok = 0;                // {0,1}
  int intent_match = 0;           // {0,1}
  double code_score = 0.0;        // {0, 0.5, 1}
  double readability = 0.0;       // [0,1]
  double chart_correctness = 0.0; // [0,1]
  double vis_score = 0.0;         // [0,1]
  double total = 0.0;             // [0,1]
};

/// Exact weighted sum of the three component scores.
double composite(const RewardBreakdown& b, const RewardWeights& w);

/// Text match with partial credit: numeric gold uses relative-error bands
/// (<=1% full credit, <=5% half), categorical gold is a case-insensitive
/// exact match. Unparseable answers against numeric gold score 0.
double text_reward(const std::string& answer, const std::string& gold, AnswerKind kind);

/// Static intent judgment from the parsed program and the execution flag.
/// intent_match is defined even when execution fails; an unparseable program
/// scores 0. code = (exec + intent) / 2.
struct CodeReward {
  int exec_ok = 0;
  int intent_match = 0;
  double code_score = 0.0;
};
CodeReward code_reward(const ExecOutcome& outcome, std::span<const Token> program_tokens,
                       const Intent& gold_intent);

/// Deterministic visual scoring of an executed chart.
/// readability: mean of 5 checks — title present, both axis labels present,
/// labels name the encoded columns, at most 8 plotted points, chart type
/// suits the task's template family.
/// chart_correctness: mean of 3 checks — intent matches gold, every plotted
/// point matches an independent grouped-aggregate recomputation (rel 1e-9),
/// every recomputed group is plotted.
struct VisReward {
  double readability = 0.0;
  double chart_correctness = 0.0;
  double vis_score = 0.0;
};
VisReward vis_reward(const ChartSpec& spec, const TaskInstance& task);

/// Independent grouped-aggregate recomputation used as the data-integrity
/// oracle; deliberately a separate code path from the interpreter.
std::vector<ChartPoint> oracle_points(const Table& table, int x_col, int y_col, AggKind agg,
                                      ChartType chart);

/// Pluggable judges. The defaults are the deterministic rule oracles above;
/// an external judge can be swapped in behind the same signatures.
struct Judges {
  std::function<double(const std::string& answer, const TaskInstance&)> text;
  std::function<int(const Program* parsed, const TaskInstance&)> intent;
  std::function<std::pair<double, double>(const ChartSpec&, const TaskInstance&)> vis;
};
Judges oracle_judges();

/// Which reward signals participate in the composite; used by the ablation
/// runner. With the gate disabled, spans are recovered leniently and the
/// gate-dominance invariant intentionally no longer holds.
struct RewardOptions {
  bool gate_enabled = true;
  bool text_enabled = true;
  bool code_enabled = true;
  bool vis_enabled = true;
};

struct ScoredSample {
  RewardBreakdown breakdown;
  std::optional<ExecOutcome> outcome;  // present iff a program span was scored
  std::optional<StructuredOutput> structured;
};

class RewardEngine {
 public:
  RewardEngine() : judges_(oracle_judges()) {}
  RewardEngine(RewardWeights weights, Judges judges, ExecLimits limits,
               RewardOptions options = {})
      : weights_(weights), judges_(std::move(judges)), limits_(limits), options_(options) {}

  ScoredSample score(std::span<const Token> completion, const TaskInstance& task) const;

  const RewardWeights& weights() const { return weights_; }
  const RewardOptions& options() const { return options_; }
  const ExecLimits& limits() const { return limits_; }

 private:
  RewardWeights weights_;
  Judges judges_;
  ExecLimits limits_;
  RewardOptions options_;
};

/// Flat serialization of a breakdown, fixed field order, for metrics logs.
std::string breakdown_to_string(const RewardBreakdown& b);

}  // namespace chartrl
