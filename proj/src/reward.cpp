#include "chartrl/reward.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>

#include "chartrl/num_format.hpp"

namespace chartrl {

std::optional<StructuredOutput> format_check(std::span<const Token> tokens) {
  const size_t n = tokens.size();
  if (n < 6) return std::nullopt;
  if (tokens[0] != Token::BEGIN || tokens[1] != Token::ANSWER) return std::nullopt;

  size_t i = 2;
  StructuredOutput out;
  while (i < n && is_answer_value(tokens[i])) out.answer_tokens.push_back(tokens[i++]);
  if (out.answer_tokens.empty()) return std::nullopt;
  if (i >= n || tokens[i] != Token::CODE) return std::nullopt;
  ++i;

  while (i < n && tokens[i] != Token::END) out.program_tokens.push_back(tokens[i++]);
  if (out.program_tokens.empty() || out.program_tokens.back() != Token::SHOW) return std::nullopt;
  if (i >= n) return std::nullopt;   // no END
  if (i + 1 != n) return std::nullopt;  // END must close the sequence

  out.answer_text = decode_answer(out.answer_tokens);
  return out;
}

double composite(const RewardBreakdown& b, const RewardWeights& w) {
  return w.alpha * b.text_score + w.beta * b.code_score + w.gamma * b.vis_score;
}

namespace {

bool parse_full_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size();
}

bool iequals(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

}  // namespace

double text_reward(const std::string& answer, const std::string& gold, AnswerKind kind) {
  if (kind == AnswerKind::CATEGORICAL) return iequals(answer, gold) ? 1.0 : 0.0;
  double a = 0.0, g = 0.0;
  if (!parse_full_double(answer, a) || !parse_full_double(gold, g)) return 0.0;
  double rel = std::fabs(a - g) / std::max(std::fabs(g), 1e-12);
  if (rel <= 0.01) return 1.0;
  if (rel <= 0.05) return 0.5;
  return 0.0;
}

CodeReward code_reward(const ExecOutcome& outcome, std::span<const Token> program_tokens,
                       const Intent& gold_intent) {
  CodeReward r;
  r.exec_ok = outcome.ok() ? 1 : 0;
  Result<Program> parsed = parse(program_tokens);
  if (parsed.ok() && program_intent(parsed.value()) == gold_intent) r.intent_match = 1;
  r.code_score = (r.exec_ok + r.intent_match) / 2.0;
  return r;
}

std::vector<ChartPoint> oracle_points(const Table& table, int x_col, int y_col, AggKind agg,
                                      ChartType chart) {
  std::vector<ChartPoint> out;
  const bool grouped = chart == ChartType::BAR || chart == ChartType::PIE;
  const bool numeric_x =
      table.columns[static_cast<size_t>(x_col)].kind == ColumnKind::NUMERIC;

  if (!grouped) {
    for (const auto& row : table.rows) {
      ChartPoint p;
      const Cell& xc = row[static_cast<size_t>(x_col)];
      if (cell_is_numeric(xc))
        p.x = cell_number(xc);
      else
        p.x = cell_label(xc);
      p.y = cell_number(row[static_cast<size_t>(y_col)]);
      out.push_back(std::move(p));
    }
    if (numeric_x) {
      std::stable_sort(out.begin(), out.end(), [](const ChartPoint& a, const ChartPoint& b) {
        return std::get<double>(a.x) < std::get<double>(b.x);
      });
    }
    return out;
  }

  // Collect raw values per key, then aggregate in a second pass.
  std::vector<Cell> keys;
  std::vector<std::vector<double>> values;
  for (const auto& row : table.rows) {
    const Cell& key = row[static_cast<size_t>(x_col)];
    size_t slot = keys.size();
    for (size_t k = 0; k < keys.size(); ++k) {
      if (keys[k] == key) {
        slot = k;
        break;
      }
    }
    if (slot == keys.size()) {
      keys.push_back(key);
      values.emplace_back();
    }
    double v = 0.0;
    if (agg != AggKind::COUNT) v = cell_number(row[static_cast<size_t>(y_col)]);
    values[slot].push_back(v);
  }

  std::vector<size_t> order(keys.size());
  std::iota(order.begin(), order.end(), size_t{0});
  if (numeric_x) {
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return cell_number(keys[a]) < cell_number(keys[b]);
    });
  }

  for (size_t idx : order) {
    const auto& vs = values[idx];
    double v = 0.0;
    switch (agg) {
      case AggKind::SUM:
        v = std::accumulate(vs.begin(), vs.end(), 0.0);
        break;
      case AggKind::MEAN:
        v = std::accumulate(vs.begin(), vs.end(), 0.0) / static_cast<double>(vs.size());
        break;
      case AggKind::MAX:
        v = *std::max_element(vs.begin(), vs.end());
        break;
      case AggKind::MIN:
        v = *std::min_element(vs.begin(), vs.end());
        break;
      case AggKind::COUNT:
        v = static_cast<double>(vs.size());
        break;
      case AggKind::NONE:
        break;
    }
    ChartPoint p;
    if (cell_is_numeric(keys[idx]))
      p.x = cell_number(keys[idx]);
    else
      p.x = cell_label(keys[idx]);
    p.y = v;
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

bool chart_suits_template(ChartType chart, TemplateId tmpl) {
  switch (tmpl) {
    case TemplateId::AGG_SCALAR:
      return chart == ChartType::SCATTER;
    case TemplateId::TREND_LINE:
      return chart == ChartType::LINE;
    default:
      return chart == ChartType::BAR || chart == ChartType::PIE;
  }
}

bool y_close(double got, double want) {
  return std::fabs(got - want) <= 1e-9 * std::max(1.0, std::fabs(want));
}

std::string point_key(const ChartPoint& p) {
  if (std::holds_alternative<std::string>(p.x)) return "s:" + std::get<std::string>(p.x);
  return "n:" + format_double(std::get<double>(p.x));
}

}  // namespace

VisReward vis_reward(const ChartSpec& spec, const TaskInstance& task) {
  VisReward r;

  int read_hits = 0;
  if (spec.title.has_value()) ++read_hits;
  const bool both_labels = spec.xlabel.has_value() && spec.ylabel.has_value();
  if (both_labels) ++read_hits;
  if (both_labels && *spec.xlabel == spec.x_field && *spec.ylabel == spec.y_field) ++read_hits;
  if (spec.points.size() <= 8) ++read_hits;
  if (chart_suits_template(spec.chart, task.template_id)) ++read_hits;
  r.readability = read_hits / 5.0;

  int corr_hits = 0;
  if (spec_intent(spec) == task.gold_intent) ++corr_hits;

  const auto oracle = oracle_points(task.table, spec.x_col, spec.y_col, spec.agg, spec.chart);
  const bool grouped = spec.chart == ChartType::BAR || spec.chart == ChartType::PIE;
  bool integrity = true, complete = true;
  if (grouped) {
    std::map<std::string, double> want;
    for (const auto& p : oracle) want[point_key(p)] = p.y;
    std::map<std::string, int> got;
    for (const auto& p : spec.points) {
      auto it = want.find(point_key(p));
      if (it == want.end() || !y_close(p.y, it->second)) integrity = false;
      got[point_key(p)] = 1;
    }
    for (const auto& [key, value] : want) {
      (void)value;
      if (!got.count(key)) complete = false;
    }
  } else {
    if (spec.points.size() != oracle.size()) {
      integrity = false;
      complete = false;
    } else {
      for (size_t i = 0; i < oracle.size(); ++i) {
        if (spec.points[i].x != oracle[i].x || !y_close(spec.points[i].y, oracle[i].y))
          integrity = false;
      }
    }
  }
  if (integrity) ++corr_hits;
  if (complete) ++corr_hits;
  r.chart_correctness = corr_hits / 3.0;

  r.vis_score = (r.readability + r.chart_correctness) / 2.0;
  return r;
}

Judges oracle_judges() {
  Judges j;
  j.text = [](const std::string& answer, const TaskInstance& task) {
    return text_reward(answer, task.gold_answer, answer_kind_of(task.template_id));
  };
  j.intent = [](const Program* parsed, const TaskInstance& task) {
    return (parsed && program_intent(*parsed) == task.gold_intent) ? 1 : 0;
  };
  j.vis = [](const ChartSpec& spec, const TaskInstance& task) {
    VisReward v = vis_reward(spec, task);
    return std::pair<double, double>(v.readability, v.chart_correctness);
  };
  return j;
}

namespace {

// Best-effort span recovery for gate-disabled scoring: answer tokens after
// the first ANSWER, program tokens between the first CODE and the next END.
StructuredOutput lenient_extract(std::span<const Token> tokens) {
  StructuredOutput out;
  const size_t n = tokens.size();
  for (size_t i = 0; i < n; ++i) {
    if (tokens[i] == Token::ANSWER) {
      for (size_t k = i + 1; k < n && is_answer_value(tokens[k]); ++k)
        out.answer_tokens.push_back(tokens[k]);
      break;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (tokens[i] == Token::CODE) {
      for (size_t k = i + 1; k < n && tokens[k] != Token::END; ++k)
        out.program_tokens.push_back(tokens[k]);
      break;
    }
  }
  out.answer_text = decode_answer(out.answer_tokens);
  return out;
}

}  // namespace

ScoredSample RewardEngine::score(std::span<const Token> completion,
                                 const TaskInstance& task) const {
  ScoredSample s;
  auto structured = format_check(completion);
  s.breakdown.format_ok = structured.has_value();

  if (!structured && options_.gate_enabled) return s;  // total 0, everything 0

  StructuredOutput so = structured ? std::move(*structured) : lenient_extract(completion);

  s.breakdown.text_score = judges_.text(so.answer_text, task);

  ExecOutcome outcome = execute(so.program_tokens, task.table, limits_);
  Result<Program> parsed = parse(so.program_tokens);
  s.breakdown.exec_ok = outcome.ok() ? 1 : 0;
  s.breakdown.intent_match = judges_.intent(parsed.ok() ? &parsed.value() : nullptr, task);
  s.breakdown.code_score = (s.breakdown.exec_ok + s.breakdown.intent_match) / 2.0;

  if (outcome.ok()) {
    auto [readability, correctness] = judges_.vis(*outcome.spec, task);
    s.breakdown.readability = readability;
    s.breakdown.chart_correctness = correctness;
  }
  s.breakdown.vis_score = (s.breakdown.readability + s.breakdown.chart_correctness) / 2.0;

  double w_text = options_.text_enabled ? weights_.alpha : 0.0;
  double w_code = options_.code_enabled ? weights_.beta : 0.0;
  double w_vis = options_.vis_enabled ? weights_.gamma : 0.0;
  double w_sum = w_text + w_code + w_vis;
  if (w_sum > 0.0) {
    s.breakdown.total = (w_text * s.breakdown.text_score + w_code * s.breakdown.code_score +
                         w_vis * s.breakdown.vis_score) /
                        w_sum;
  } else {
    s.breakdown.total = s.breakdown.format_ok ? 1.0 : 0.0;
  }

  s.outcome = std::move(outcome);
  s.structured = std::move(so);
  return s;
}

std::string breakdown_to_string(const RewardBreakdown& b) {
  std::string out;
  out += b.format_ok ? "1" : "0";
  out += ',' + format_double(b.text_score);
  out += ',' + std::to_string(b.exec_ok);
  out += ',' + std::to_string(b.intent_match);
  out += ',' + format_double(b.code_score);
  out += ',' + format_double(b.readability);
  out += ',' + format_double(b.chart_correctness);
  out += ',' + format_double(b.vis_score);
  out += ',' + format_double(b.total);
  return out;
}

}  // namespace chartrl
