// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include "rtn/table.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rtn {

namespace {

constexpr const char* kCsvStamp = "# rtnoise-table v";
constexpr const char* kJsonSchema = "rtnoise-table/";

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

Cell parse_cell(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (!s.empty() && res.ec == std::errc() && res.ptr == last) return v;
  return s;
}

void check_version(int version) {
  if (version != Table::kSchemaVersion) {
    throw std::invalid_argument("unsupported table schema version " + std::to_string(version));
  }
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool stamped = false;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kCsvStamp, 0) == 0) {
        check_version(std::stoi(line.substr(std::string(kCsvStamp).size())));
        stamped = true;
      }
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(t.columns.size()) + " cells, found " +
                                  std::to_string(cells.size()));
    }
    std::vector<Cell> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c));
    t.rows.push_back(std::move(row));
  }
  if (!stamped) throw std::invalid_argument("missing '# rtnoise-table v1' header comment");
  if (!have_header) throw std::invalid_argument("missing header row");
  return t;
}

Table parse_json(const std::string& text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  const std::string schema = doc.at("schema").get<std::string>();
  if (schema.rfind(kJsonSchema, 0) != 0) throw std::invalid_argument("unknown schema " + schema);
  check_version(std::stoi(schema.substr(std::string(kJsonSchema).size())));
  Table t;
  t.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& obj : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& col : t.columns) {
      const auto& v = obj.at(col);
      if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else {
        row.emplace_back(v.get<std::string>());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv|json)");
}

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (const auto* d = std::get_if<double>(&row[i]); d && !std::isfinite(*d)) {
      throw std::invalid_argument("non-finite value in column " + columns[i]);
    }
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column named " + name);
}

double Table::number(std::size_t row, const std::string& column) const {
  return std::get<double>(rows.at(row).at(column_index(column)));
}

const std::string& Table::text(std::size_t row, const std::string& column) const {
  return std::get<std::string>(rows.at(row).at(column_index(column)));
}

void Table::write(std::ostream& out, TableFormat format) const {
  if (format == TableFormat::csv) {
    out << kCsvStamp << kSchemaVersion << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        if (const auto* d = std::get_if<double>(&row[i])) {
          out << format_number(*d);
        } else {
          out << csv_escape(std::get<std::string>(row[i]));
        }
      }
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["schema"] = std::string(kJsonSchema) + std::to_string(kSchemaVersion);
  doc["columns"] = columns;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[columns[i]] = v; }, row[i]);
    }
    rows_json.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows_json);
  out << doc.dump(2) << '\n';
}

std::string Table::to_string(TableFormat format) const {
  std::ostringstream out;
  write(out, format);
  return out.str();
}

Table Table::parse(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') return parse_json(text);
  return parse_csv(text);
}

}  // namespace rtn
