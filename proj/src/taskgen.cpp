#include "chartrl/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "chartrl/rng.hpp"

namespace chartrl {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kTableStream = 0x7461626c65ull;
constexpr uint64_t kTaskStream = 0x7461736bull;
constexpr uint64_t kDatasetStream = 0x64617461ull;

constexpr std::array<QueryTemplate, kTemplateCount> kTemplates = {{
    {TemplateId::AGG_SCALAR, "What is the {agg} of {y}? Plot {y} against {x}.",
     AnswerKind::NUMERIC},
    {TemplateId::ARGMAX_CAT, "Which {x} has the highest total {y}? Show totals by {x}.",
     AnswerKind::CATEGORICAL},
    {TemplateId::ARGMIN_CAT, "Which {x} has the lowest total {y}? Show totals by {x}.",
     AnswerKind::CATEGORICAL},
    {TemplateId::GROUP_BAR, "Draw a bar chart of {agg} {y} by {x}. How many {x} groups are shown?",
     AnswerKind::NUMERIC},
    {TemplateId::TREND_LINE, "Plot {y} over {x}. What is {y} at the highest {x}?",
     AnswerKind::NUMERIC},
    {TemplateId::SHARE_PIE,
     "Which {x} holds the largest share of total {y}? Show the share breakdown.",
     AnswerKind::CATEGORICAL},
}};

constexpr std::array<std::string_view, kTemplateCount> kTemplateNames = {
    "AGG_SCALAR", "ARGMAX_CAT", "ARGMIN_CAT", "GROUP_BAR", "TREND_LINE", "SHARE_PIE"};

constexpr std::array<std::string_view, 4> kCatNames = {"region", "product", "team", "channel"};
constexpr std::array<std::string_view, 8> kNumNames = {"sales", "profit", "units",  "score",
                                                       "cost",  "growth", "weight", "rating"};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string render_pattern(std::string_view pattern, const std::string& x, const std::string& y,
                           const std::string& agg) {
  std::string out;
  for (size_t i = 0; i < pattern.size();) {
    if (pattern[i] == '{') {
      size_t end = pattern.find('}', i);
      std::string_view key = pattern.substr(i + 1, end - i - 1);
      if (key == "x")
        out += x;
      else if (key == "y")
        out += y;
      else if (key == "agg")
        out += agg;
      i = end + 1;
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

// Per-category accumulation in first-appearance order.
struct CatSums {
  std::vector<std::string> keys;
  std::vector<double> sums;
  std::vector<int> counts;

  void add(const std::string& key, double v) {
    for (size_t i = 0; i < keys.size(); ++i) {
      if (keys[i] == key) {
        sums[i] += v;
        counts[i] += 1;
        return;
      }
    }
    keys.push_back(key);
    sums.push_back(v);
    counts.push_back(1);
  }
};

CatSums category_sums(const Table& table, int cat_col, int num_col) {
  CatSums acc;
  for (const auto& row : table.rows)
    acc.add(cell_label(row[static_cast<size_t>(cat_col)]),
            cell_number(row[static_cast<size_t>(num_col)]));
  return acc;
}

int pick_from(Rng& rng, const std::vector<int>& pool) {
  return pool[rng.below(pool.size())];
}

}  // namespace

std::span<const QueryTemplate> query_templates() { return kTemplates; }

std::string_view template_name(TemplateId id) { return kTemplateNames[static_cast<size_t>(id)]; }

std::optional<TemplateId> template_from_name(std::string_view name) {
  for (int i = 0; i < kTemplateCount; ++i)
    if (kTemplateNames[static_cast<size_t>(i)] == name) return static_cast<TemplateId>(i);
  return std::nullopt;
}

AnswerKind answer_kind_of(TemplateId id) {
  return kTemplates[static_cast<size_t>(id)].answer_kind;
}

Table generate_table(uint64_t seed, int min_cols, int max_cols) {
  min_cols = std::clamp(min_cols, 3, 6);
  max_cols = std::clamp(max_cols, min_cols, 6);
  Rng rng(mix_seed(seed, kTableStream));

  const int n_cols = rng.range_int(min_cols, max_cols);
  const int n_cat = rng.range_int(1, n_cols - 2);  // keep >= 2 numeric

  std::vector<ColumnKind> kinds(static_cast<size_t>(n_cols), ColumnKind::NUMERIC);
  for (int i = 0; i < n_cat; ++i) kinds[static_cast<size_t>(i)] = ColumnKind::CATEGORICAL;
  for (int i = n_cols - 1; i > 0; --i)
    std::swap(kinds[static_cast<size_t>(i)], kinds[rng.below(static_cast<uint64_t>(i) + 1)]);

  // Draw names without replacement per kind.
  std::vector<int> cat_name_order(kCatNames.size()), num_name_order(kNumNames.size());
  for (size_t i = 0; i < cat_name_order.size(); ++i) cat_name_order[i] = static_cast<int>(i);
  for (size_t i = 0; i < num_name_order.size(); ++i) num_name_order[i] = static_cast<int>(i);
  for (size_t i = cat_name_order.size() - 1; i > 0; --i)
    std::swap(cat_name_order[i], cat_name_order[rng.below(i + 1)]);
  for (size_t i = num_name_order.size() - 1; i > 0; --i)
    std::swap(num_name_order[i], num_name_order[rng.below(i + 1)]);

  Table table;
  int cat_seen = 0, num_seen = 0;
  for (int c = 0; c < n_cols; ++c) {
    ColumnSpec col;
    col.kind = kinds[static_cast<size_t>(c)];
    if (col.kind == ColumnKind::CATEGORICAL) {
      col.name = kCatNames[static_cast<size_t>(cat_name_order[static_cast<size_t>(cat_seen++)])];
      col.cardinality = rng.range_int(2, 8);
    } else {
      col.name = kNumNames[static_cast<size_t>(num_name_order[static_cast<size_t>(num_seen++)])];
      if (num_seen == 1) {
        col.low = round2(rng.uniform(0.0, 50.0));  // first numeric column stays non-negative
      } else {
        col.low = round2(rng.uniform(-50.0, 100.0));
      }
      col.high = round2(col.low + rng.uniform(10.0, 200.0));
    }
    table.columns.push_back(std::move(col));
  }

  const int rows = rng.range_int(5, 20);
  for (int r = 0; r < rows; ++r) {
    std::vector<Cell> row;
    for (const auto& col : table.columns) {
      if (col.kind == ColumnKind::CATEGORICAL) {
        row.emplace_back(
            std::string(category_labels()[rng.below(static_cast<uint64_t>(col.cardinality))]));
      } else {
        row.emplace_back(round2(rng.uniform(col.low, col.high)));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_answer_number(double v) {
  if (std::fabs(v) < 1e-4) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

TaskInstance generate_task(uint64_t seed, TemplateId tmpl) {
  Rng rng(mix_seed(seed, kTaskStream));
  TaskInstance task;
  task.task_id = static_cast<int64_t>(seed);
  task.template_id = tmpl;
  task.table = generate_table(mix_seed(seed, kTableStream));
  const Table& table = task.table;

  std::vector<int> cat_cols, num_cols, nonneg_num_cols;
  for (int c = 0; c < table.width(); ++c) {
    const auto& col = table.columns[static_cast<size_t>(c)];
    if (col.kind == ColumnKind::CATEGORICAL) {
      cat_cols.push_back(c);
    } else {
      num_cols.push_back(c);
      if (col.low >= 0.0) nonneg_num_cols.push_back(c);
    }
  }

  int x_col = 0, y_col = 0;
  AggKind intent_agg = AggKind::NONE;
  ChartType chart = ChartType::BAR;
  std::string agg_word;

  switch (tmpl) {
    case TemplateId::AGG_SCALAR: {
      chart = ChartType::SCATTER;
      x_col = pick_from(rng, num_cols);
      std::vector<int> others;
      for (int c : num_cols)
        if (c != x_col) others.push_back(c);
      y_col = pick_from(rng, others);
      static constexpr AggKind kScalarAggs[] = {AggKind::SUM, AggKind::MEAN, AggKind::MAX,
                                                AggKind::MIN};
      static constexpr std::string_view kScalarWords[] = {"total", "average", "maximum",
                                                          "minimum"};
      uint64_t pick = rng.below(4);
      AggKind answer_agg = kScalarAggs[pick];
      agg_word = kScalarWords[pick];
      double acc = 0.0;
      bool first = true;
      int count = 0;
      for (const auto& row : table.rows) {
        double v = cell_number(row[static_cast<size_t>(y_col)]);
        switch (answer_agg) {
          case AggKind::SUM:
          case AggKind::MEAN:
            acc += v;
            break;
          case AggKind::MAX:
            acc = first ? v : std::max(acc, v);
            break;
          case AggKind::MIN:
            acc = first ? v : std::min(acc, v);
            break;
          default:
            break;
        }
        first = false;
        ++count;
      }
      if (answer_agg == AggKind::MEAN) acc /= count;
      task.gold_answer = format_answer_number(acc);
      break;
    }
    case TemplateId::ARGMAX_CAT:
    case TemplateId::ARGMIN_CAT:
    case TemplateId::SHARE_PIE: {
      chart = tmpl == TemplateId::SHARE_PIE ? ChartType::PIE : ChartType::BAR;
      x_col = pick_from(rng, cat_cols);
      y_col = tmpl == TemplateId::SHARE_PIE ? pick_from(rng, nonneg_num_cols)
                                            : pick_from(rng, num_cols);
      intent_agg = AggKind::SUM;
      CatSums sums = category_sums(table, x_col, y_col);
      size_t best = 0;
      for (size_t i = 1; i < sums.keys.size(); ++i) {
        if (tmpl == TemplateId::ARGMIN_CAT) {
          if (sums.sums[i] < sums.sums[best]) best = i;
        } else {
          if (sums.sums[i] > sums.sums[best]) best = i;
        }
      }
      task.gold_answer = sums.keys[best];
      break;
    }
    case TemplateId::GROUP_BAR: {
      chart = ChartType::BAR;
      x_col = pick_from(rng, cat_cols);
      y_col = pick_from(rng, num_cols);
      static constexpr AggKind kGroupAggs[] = {AggKind::SUM, AggKind::MEAN, AggKind::COUNT};
      static constexpr std::string_view kGroupWords[] = {"total", "average", "the count of"};
      uint64_t pick = rng.below(3);
      intent_agg = kGroupAggs[pick];
      agg_word = kGroupWords[pick];
      CatSums sums = category_sums(table, x_col, y_col);
      task.gold_answer = format_answer_number(static_cast<double>(sums.keys.size()));
      break;
    }
    case TemplateId::TREND_LINE: {
      chart = ChartType::LINE;
      x_col = pick_from(rng, num_cols);
      std::vector<int> others;
      for (int c : num_cols)
        if (c != x_col) others.push_back(c);
      y_col = pick_from(rng, others);
      double best_x = 0.0, best_y = 0.0;
      bool first = true;
      for (const auto& row : table.rows) {
        double xv = cell_number(row[static_cast<size_t>(x_col)]);
        if (first || xv >= best_x) {
          best_x = xv;
          best_y = cell_number(row[static_cast<size_t>(y_col)]);
          first = false;
        }
      }
      task.gold_answer = format_answer_number(best_y);
      break;
    }
  }

  task.gold_intent = Intent{chart, x_col, y_col, intent_agg};
  task.query = render_pattern(kTemplates[static_cast<size_t>(tmpl)].text_pattern,
                              table.columns[static_cast<size_t>(x_col)].name,
                              table.columns[static_cast<size_t>(y_col)].name, agg_word);

  // Reference program: gold intent plus title and axis labels.
  auto& prog = task.reference_program;
  prog = {Token::CHART, chart_type_token(chart), Token::X, column_token(x_col), Token::Y,
          column_token(y_col)};
  if (intent_agg != AggKind::NONE) {
    prog.push_back(Token::AGG);
    prog.push_back(agg_token(intent_agg));
  }
  prog.push_back(Token::TITLE);
  prog.push_back(title_token(static_cast<int>(tmpl)));
  prog.push_back(Token::XLABEL);
  prog.push_back(column_token(x_col));
  prog.push_back(Token::YLABEL);
  prog.push_back(column_token(y_col));
  prog.push_back(Token::SHOW);
  return task;
}

std::vector<TaskInstance> make_dataset(uint64_t base_seed, int count,
                                       std::span<const double> weights) {
  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(kTemplateCount, 1.0);
  if (static_cast<int>(w.size()) != kTemplateCount)
    throw std::runtime_error("template weights must have 6 entries");
  double total = 0.0;
  for (double v : w) total += v;

  Rng rng(mix_seed(base_seed, kDatasetStream));
  std::vector<TaskInstance> tasks;
  tasks.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    double r = rng.next_double() * total;
    int tmpl = 0;
    double acc = 0.0;
    for (int t = 0; t < kTemplateCount; ++t) {
      acc += w[static_cast<size_t>(t)];
      if (r < acc) {
        tmpl = t;
        break;
      }
      tmpl = t;
    }
    TaskInstance task =
        generate_task(mix_seed(base_seed, static_cast<uint64_t>(i)), static_cast<TemplateId>(tmpl));
    task.task_id = i;
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<Token> answer_to_tokens(const std::string& answer, AnswerKind kind) {
  std::vector<Token> out;
  if (kind == AnswerKind::CATEGORICAL) {
    auto labels = category_labels();
    for (int i = 0; i < kCategoryPool; ++i) {
      if (labels[static_cast<size_t>(i)] == answer) {
        out.push_back(category_token(i));
        return out;
      }
    }
    throw std::runtime_error("answer '" + answer + "' is not a known category label");
  }
  for (char c : answer) {
    if (c >= '0' && c <= '9')
      out.push_back(digit_token(c - '0'));
    else if (c == '.')
      out.push_back(Token::DOT);
    else if (c == '-')
      out.push_back(Token::MINUS);
    else
      throw std::runtime_error("numeric answer '" + answer + "' has unencodable character");
  }
  return out;
}

std::vector<Token> reference_output(const TaskInstance& task) {
  std::vector<Token> out = {Token::BEGIN, Token::ANSWER};
  auto ans = answer_to_tokens(task.gold_answer, answer_kind_of(task.template_id));
  out.insert(out.end(), ans.begin(), ans.end());
  out.push_back(Token::CODE);
  out.insert(out.end(), task.reference_program.begin(), task.reference_program.end());
  out.push_back(Token::END);
  return out;
}

namespace {

ordered_json task_to_json(const TaskInstance& task) {
  ordered_json j;
  j["task_id"] = task.task_id;
  j["template"] = template_name(task.template_id);
  ordered_json cols = ordered_json::array();
  for (const auto& col : task.table.columns) {
    ordered_json c;
    c["name"] = col.name;
    if (col.kind == ColumnKind::CATEGORICAL) {
      c["kind"] = "cat";
      c["cardinality"] = col.cardinality;
    } else {
      c["kind"] = "num";
      c["low"] = col.low;
      c["high"] = col.high;
    }
    cols.push_back(std::move(c));
  }
  j["columns"] = std::move(cols);
  ordered_json rows = ordered_json::array();
  for (const auto& row : task.table.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& cell : row) {
      if (cell_is_numeric(cell))
        r.push_back(cell_number(cell));
      else
        r.push_back(cell_label(cell));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["query"] = task.query;
  j["gold_answer"] = task.gold_answer;
  j["gold_intent"] = {{"chart", chart_type_name(task.gold_intent.chart)},
                      {"x", task.gold_intent.x_col},
                      {"y", task.gold_intent.y_col},
                      {"agg", agg_name(task.gold_intent.agg)}};
  j["reference_program"] = tokens_to_string(task.reference_program);
  return j;
}

TaskInstance task_from_json(const ordered_json& j) {
  TaskInstance task;
  task.task_id = j.at("task_id").get<int64_t>();
  auto tmpl = template_from_name(j.at("template").get<std::string>());
  if (!tmpl) throw std::runtime_error("unknown template '" + j.at("template").get<std::string>() + "'");
  task.template_id = *tmpl;
  for (const auto& c : j.at("columns")) {
    ColumnSpec col;
    col.name = c.at("name").get<std::string>();
    std::string kind = c.at("kind").get<std::string>();
    if (kind == "cat") {
      col.kind = ColumnKind::CATEGORICAL;
      col.cardinality = c.at("cardinality").get<int>();
    } else if (kind == "num") {
      col.kind = ColumnKind::NUMERIC;
      col.low = c.at("low").get<double>();
      col.high = c.at("high").get<double>();
    } else {
      throw std::runtime_error("unknown column kind '" + kind + "'");
    }
    task.table.columns.push_back(std::move(col));
  }
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& cell : r) {
      if (cell.is_string())
        row.emplace_back(cell.get<std::string>());
      else
        row.emplace_back(cell.get<double>());
    }
    task.table.rows.push_back(std::move(row));
  }
  task.query = j.at("query").get<std::string>();
  task.gold_answer = j.at("gold_answer").get<std::string>();
  const auto& gi = j.at("gold_intent");
  auto chart = chart_type_from_name(gi.at("chart").get<std::string>());
  auto agg = agg_from_name(gi.at("agg").get<std::string>());
  if (!chart || !agg) throw std::runtime_error("bad gold_intent");
  task.gold_intent =
      Intent{*chart, gi.at("x").get<int>(), gi.at("y").get<int>(), *agg};
  task.reference_program = tokens_from_string(j.at("reference_program").get<std::string>());
  return task;
}

}  // namespace

void write_dataset(std::span<const TaskInstance> tasks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& task : tasks) out << task_to_json(task).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<TaskInstance> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::vector<TaskInstance> tasks;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      tasks.push_back(task_from_json(ordered_json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tasks;
}

}  // namespace chartrl
