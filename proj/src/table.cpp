#include "chartrl/table.hpp"

#include <set>
#include <string>

namespace chartrl {

std::string validate_table(const Table& table) {
  std::set<std::string> names;
  for (const auto& col : table.columns) {
    if (col.name.empty()) return "empty column name";
    if (!names.insert(col.name).second) return "duplicate column name '" + col.name + "'";
    if (col.kind == ColumnKind::CATEGORICAL) {
      if (col.cardinality < 2 || col.cardinality > 8)
        return "categorical cardinality out of range for '" + col.name + "'";
    } else {
      if (!(col.low < col.high)) return "numeric range not ordered for '" + col.name + "'";
    }
  }
  if (table.row_count() < 5 || table.row_count() > 20) return "row count out of range";
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) != table.width()) return "row width mismatch";
    for (int c = 0; c < table.width(); ++c) {
      bool want_num = table.columns[static_cast<size_t>(c)].kind == ColumnKind::NUMERIC;
      if (cell_is_numeric(row[static_cast<size_t>(c)]) != want_num)
        return "cell type mismatch in column '" + table.columns[static_cast<size_t>(c)].name + "'";
    }
  }
  return "";
}

}  // namespace chartrl
