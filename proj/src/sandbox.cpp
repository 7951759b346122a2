#include "chartrl/sandbox.hpp"

namespace chartrl {

ExecOutcome execute(std::span<const Token> tokens, const Table& table, const ExecLimits& limits) {
  ExecOutcome out;
  if (static_cast<int>(tokens.size()) > limits.max_tokens) {
    out.error = DslError{ErrorClass::LIMIT_EXCEEDED, "token budget exceeded", std::nullopt};
    return out;
  }
  out.steps_used = static_cast<int>(tokens.size());

  Result<Program> parsed = parse(tokens);
  if (!parsed.ok()) {
    out.error = parsed.error();
    return out;
  }

  int steps = out.steps_used;
  Result<ChartSpec> spec =
      interpret(parsed.value(), table, limits.max_interpreter_steps, limits.max_points, steps);
  out.steps_used = steps;
  if (!spec.ok()) {
    out.error = spec.error();
    return out;
  }
  out.status = ExecStatus::OK;
  out.spec = std::move(spec.value());
  return out;
}

ExecOutcome execute(std::span<const Token> tokens, const Table& table) {
  return execute(tokens, table, ExecLimits{});
}

}  // namespace chartrl
