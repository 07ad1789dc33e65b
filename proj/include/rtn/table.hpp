// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace rtn {

/// Tabular output shared by every CLI command.
///
/// CSV: a "# rtnoise-table v1" comment, a header row, then one line per row;
/// numbers use 17 significant digits and '.' as decimal separator.
/// JSON: {"schema": "rtnoise-table/1", "columns": [...], "rows": [{column: value, ...}, ...]}.
using Cell = std::variant<double, std::string>;

enum class TableFormat { csv, json };

TableFormat parse_table_format(const std::string& name);

struct Table {
  static constexpr int kSchemaVersion = 1;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Appends a row; throws std::invalid_argument on a column-count mismatch
  /// or a non-finite number.
  void add_row(std::vector<Cell> row);

  [[nodiscard]] std::size_t column_index(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& column) const;
  [[nodiscard]] const std::string& text(std::size_t row, const std::string& column) const;

  void write(std::ostream& out, TableFormat format) const;
  [[nodiscard]] std::string to_string(TableFormat format) const;

  /// Parses either format (detected from the first non-blank character).
  static Table parse(const std::string& text);
};

/// Number formatting used by the CSV writer.
std::string format_number(double x);

}  // namespace rtn
