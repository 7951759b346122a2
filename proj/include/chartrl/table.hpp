#pragma once

#include <string>
#include <variant>
#include <vector>

namespace chartrl {

enum class ColumnKind { CATEGORICAL, NUMERIC };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::NUMERIC;
  int cardinality = 0;  // categorical only, 2..8
  double low = 0.0;     // numeric only
  double high = 0.0;

  bool operator==(const ColumnSpec&) const = default;
};

/// A table cell: a category label or a numeric value.
using Cell = std::variant<std::string, double>;

inline bool cell_is_numeric(const Cell& c) { return std::holds_alternative<double>(c); }
inline double cell_number(const Cell& c) { return std::get<double>(c); }
inline const std::string& cell_label(const Cell& c) { return std::get<std::string>(c); }

struct Table {
  std::vector<ColumnSpec> columns;
  std::vector<std::vector<Cell>> rows;

  int width() const { return static_cast<int>(columns.size()); }
  int row_count() const { return static_cast<int>(rows.size()); }

  bool operator==(const Table&) const = default;
};

/// Checks the structural invariants (unique names, row shape, cell/column
/// type consistency, categorical cardinality bounds). Returns a diagnostic
/// or empty string when the table is well formed.
std::string validate_table(const Table& table);

}  // namespace chartrl
