#pragma once

#include <optional>
#include <span>

#include "chartrl/dsl.hpp"
#include "chartrl/table.hpp"
#include "chartrl/vocab.hpp"

namespace chartrl {

/// Resource budget for one execution. Generous relative to the language; the
/// contract mirrors real sandbox timeouts.
struct ExecLimits {
  int max_tokens = 64;
  int max_interpreter_steps = 10000;
  int max_points = 1024;
};

enum class ExecStatus { OK, FAILED };

struct ExecOutcome {
  ExecStatus status = ExecStatus::FAILED;
  std::optional<ChartSpec> spec;  // present iff OK
  std::optional<DslError> error;  // present iff FAILED
  int steps_used = 0;

  bool ok() const { return status == ExecStatus::OK; }
};

/// Runs an arbitrary token sequence: length check, parse, interpret. Never
/// throws; every failure is an ExecOutcome carrying one classified DslError.
ExecOutcome execute(std::span<const Token> tokens, const Table& table, const ExecLimits& limits);
ExecOutcome execute(std::span<const Token> tokens, const Table& table);

}  // namespace chartrl
