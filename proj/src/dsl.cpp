#include "chartrl/dsl.hpp"

#include <algorithm>
#include <map>

namespace chartrl {

namespace {

constexpr std::string_view kChartNames[] = {"LINE", "BAR", "SCATTER", "PIE"};
constexpr std::string_view kAggNames[] = {"NONE", "SUM", "MEAN", "MAX", "MIN", "COUNT"};
constexpr std::string_view kErrorNames[] = {"SYNTAX",         "UNKNOWN_COLUMN", "TYPE_MISMATCH",
                                            "SHAPE_MISMATCH", "VALUE_ERROR",    "LIMIT_EXCEEDED"};

DslError syntax(std::string message, int pos) {
  return DslError{ErrorClass::SYNTAX, std::move(message), pos};
}

}  // namespace

std::string_view chart_type_name(ChartType t) { return kChartNames[static_cast<int>(t)]; }
std::string_view agg_name(AggKind a) { return kAggNames[static_cast<int>(a)]; }
std::string_view error_class_name(ErrorClass c) { return kErrorNames[static_cast<int>(c)]; }

std::optional<ChartType> chart_type_from_name(std::string_view name) {
  for (int i = 0; i < 4; ++i)
    if (kChartNames[i] == name) return static_cast<ChartType>(i);
  return std::nullopt;
}

std::optional<AggKind> agg_from_name(std::string_view name) {
  for (int i = 0; i < 6; ++i)
    if (kAggNames[i] == name) return static_cast<AggKind>(i);
  return std::nullopt;
}

ChartType chart_type_of(Token t) {
  return static_cast<ChartType>(static_cast<int>(t) - static_cast<int>(Token::LINE));
}

AggKind agg_of(Token t) {
  return static_cast<AggKind>(static_cast<int>(t) - static_cast<int>(Token::SUM) + 1);
}

Token chart_type_token(ChartType t) {
  return static_cast<Token>(static_cast<int>(Token::LINE) + static_cast<int>(t));
}

Token agg_token(AggKind a) {
  return static_cast<Token>(static_cast<int>(Token::SUM) + static_cast<int>(a) - 1);
}

AggKind effective_agg(const Program& p) {
  if (p.chart == ChartType::BAR || p.chart == ChartType::PIE) return p.agg.value_or(AggKind::SUM);
  return AggKind::NONE;
}

Intent program_intent(const Program& p) { return Intent{p.chart, p.x_col, p.y_col, effective_agg(p)}; }

Result<Program> parse(std::span<const Token> tokens) {
  const int n = static_cast<int>(tokens.size());
  if (n == 0) return syntax("empty program", 0);
  if (tokens[0] != Token::CHART) return syntax("program must start with CHART", 0);
  if (n < 2 || !is_chart_type(tokens[1])) return syntax("CHART requires a chart type", 1);

  Program p;
  p.chart = chart_type_of(tokens[1]);

  bool seen_x = false, seen_y = false, seen_agg = false, seen_title = false, seen_xl = false,
       seen_yl = false;

  int i = 2;
  while (i < n) {
    Token t = tokens[static_cast<size_t>(i)];
    if (t == Token::SHOW) {
      if (i + 1 != n) return syntax("tokens after SHOW", i + 1);
      p.terminated = true;
      break;
    }
    if (i + 1 >= n) return syntax("statement missing argument", i);
    Token arg = tokens[static_cast<size_t>(i + 1)];
    switch (t) {
      case Token::X:
        if (seen_x) return syntax("duplicate X", i);
        if (!is_column_ref(arg)) return syntax("X requires a column", i + 1);
        p.x_col = column_index(arg);
        seen_x = true;
        break;
      case Token::Y:
        if (seen_y) return syntax("duplicate Y", i);
        if (!is_column_ref(arg)) return syntax("Y requires a column", i + 1);
        p.y_col = column_index(arg);
        seen_y = true;
        break;
      case Token::AGG:
        if (seen_agg) return syntax("duplicate AGG", i);
        if (!is_aggregation(arg)) return syntax("AGG requires an aggregation", i + 1);
        p.agg = agg_of(arg);
        seen_agg = true;
        break;
      case Token::TITLE:
        if (seen_title) return syntax("duplicate TITLE", i);
        if (!is_title_slot(arg)) return syntax("TITLE requires a title slot", i + 1);
        p.title_slot = title_index(arg);
        seen_title = true;
        break;
      case Token::XLABEL:
        if (seen_xl) return syntax("duplicate XLABEL", i);
        if (!is_column_ref(arg)) return syntax("XLABEL requires a column", i + 1);
        p.xlabel_col = column_index(arg);
        seen_xl = true;
        break;
      case Token::YLABEL:
        if (seen_yl) return syntax("duplicate YLABEL", i);
        if (!is_column_ref(arg)) return syntax("YLABEL requires a column", i + 1);
        p.ylabel_col = column_index(arg);
        seen_yl = true;
        break;
      default:
        return syntax("unexpected token", i);
    }
    i += 2;
  }

  if (!p.terminated) return syntax("missing SHOW", n);
  if (!seen_x) return syntax("missing X clause", n);
  if (!seen_y) return syntax("missing Y clause", n);
  return p;
}

namespace {

struct GroupAcc {
  double sum = 0.0;
  double max = 0.0;
  double min = 0.0;
  int count = 0;

  void add(double v) {
    if (count == 0) {
      max = v;
      min = v;
    } else {
      max = std::max(max, v);
      min = std::min(min, v);
    }
    sum += v;
    ++count;
  }

  double value(AggKind agg) const {
    switch (agg) {
      case AggKind::SUM:
        return sum;
      case AggKind::MEAN:
        return sum / count;
      case AggKind::MAX:
        return max;
      case AggKind::MIN:
        return min;
      case AggKind::COUNT:
        return count;
      default:
        return 0.0;
    }
  }
};

}  // namespace

Result<ChartSpec> interpret(const Program& p, const Table& table, int max_steps, int max_points,
                            int& steps) {
  const int width = table.width();
  auto col_check = [&](std::optional<int> c) { return !c || *c < width; };
  if (p.x_col >= width)
    return DslError{ErrorClass::UNKNOWN_COLUMN, "x column out of range", std::nullopt};
  if (p.y_col >= width)
    return DslError{ErrorClass::UNKNOWN_COLUMN, "y column out of range", std::nullopt};
  if (!col_check(p.xlabel_col))
    return DslError{ErrorClass::UNKNOWN_COLUMN, "xlabel column out of range", std::nullopt};
  if (!col_check(p.ylabel_col))
    return DslError{ErrorClass::UNKNOWN_COLUMN, "ylabel column out of range", std::nullopt};

  const ColumnSpec& xcol = table.columns[static_cast<size_t>(p.x_col)];
  const ColumnSpec& ycol = table.columns[static_cast<size_t>(p.y_col)];
  const AggKind agg = effective_agg(p);
  const bool grouped = p.chart == ChartType::BAR || p.chart == ChartType::PIE;

  if (grouped) {
    if (agg != AggKind::COUNT && ycol.kind == ColumnKind::CATEGORICAL)
      return DslError{ErrorClass::TYPE_MISMATCH,
                      std::string(agg_name(agg)) + " requires a numeric y column", std::nullopt};
  } else {
    if (ycol.kind == ColumnKind::CATEGORICAL)
      return DslError{ErrorClass::SHAPE_MISMATCH,
                      std::string(chart_type_name(p.chart)) + " requires a numeric y column",
                      std::nullopt};
  }

  ChartSpec spec;
  spec.chart = p.chart;
  spec.x_col = p.x_col;
  spec.y_col = p.y_col;
  spec.x_field = xcol.name;
  spec.y_field = ycol.name;
  spec.agg = agg;
  if (p.title_slot) spec.title = std::string(title_phrases()[static_cast<size_t>(*p.title_slot)]);
  if (p.xlabel_col) spec.xlabel = table.columns[static_cast<size_t>(*p.xlabel_col)].name;
  if (p.ylabel_col) spec.ylabel = table.columns[static_cast<size_t>(*p.ylabel_col)].name;

  if (grouped) {
    // Group rows by x value, first-appearance order; numeric keys are
    // re-sorted ascending afterwards.
    std::vector<Cell> keys;
    std::vector<GroupAcc> accs;
    std::map<std::string, size_t> label_slot;
    std::map<double, size_t> number_slot;
    for (const auto& row : table.rows) {
      if (++steps > max_steps)
        return DslError{ErrorClass::LIMIT_EXCEEDED, "interpreter step budget exceeded",
                        std::nullopt};
      const Cell& key = row[static_cast<size_t>(p.x_col)];
      size_t slot;
      if (cell_is_numeric(key)) {
        auto [it, fresh] = number_slot.try_emplace(cell_number(key), keys.size());
        if (fresh) {
          keys.push_back(key);
          accs.emplace_back();
        }
        slot = it->second;
      } else {
        auto [it, fresh] = label_slot.try_emplace(cell_label(key), keys.size());
        if (fresh) {
          keys.push_back(key);
          accs.emplace_back();
        }
        slot = it->second;
      }
      double v = 0.0;
      if (agg != AggKind::COUNT) v = cell_number(row[static_cast<size_t>(p.y_col)]);
      accs[slot].add(v);
    }

    std::vector<size_t> order(keys.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (xcol.kind == ColumnKind::NUMERIC) {
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return cell_number(keys[a]) < cell_number(keys[b]);
      });
    }

    for (size_t idx : order) {
      if (++steps > max_steps)
        return DslError{ErrorClass::LIMIT_EXCEEDED, "interpreter step budget exceeded",
                        std::nullopt};
      double v = accs[idx].value(agg);
      if (p.chart == ChartType::PIE && v < 0.0)
        return DslError{ErrorClass::VALUE_ERROR, "negative aggregated value for PIE",
                        std::nullopt};
      ChartPoint pt;
      if (cell_is_numeric(keys[idx]))
        pt.x = cell_number(keys[idx]);
      else
        pt.x = cell_label(keys[idx]);
      pt.y = v;
      spec.points.push_back(std::move(pt));
    }
  } else {
    for (const auto& row : table.rows) {
      if (++steps > max_steps)
        return DslError{ErrorClass::LIMIT_EXCEEDED, "interpreter step budget exceeded",
                        std::nullopt};
      ChartPoint pt;
      const Cell& key = row[static_cast<size_t>(p.x_col)];
      if (cell_is_numeric(key))
        pt.x = cell_number(key);
      else
        pt.x = cell_label(key);
      pt.y = cell_number(row[static_cast<size_t>(p.y_col)]);
      spec.points.push_back(std::move(pt));
    }
    if (xcol.kind == ColumnKind::NUMERIC) {
      std::stable_sort(spec.points.begin(), spec.points.end(),
                       [](const ChartPoint& a, const ChartPoint& b) {
                         return std::get<double>(a.x) < std::get<double>(b.x);
                       });
    }
  }

  if (static_cast<int>(spec.points.size()) > max_points)
    return DslError{ErrorClass::LIMIT_EXCEEDED, "point budget exceeded", std::nullopt};
  return spec;
}

Result<ChartSpec> interpret(const Program& p, const Table& table) {
  int steps = 0;
  return interpret(p, table, 10000, 1024, steps);
}

}  // namespace chartrl
