#pragma once

// Minimal RFC 4180 reader/writer: comma separated, double-quoted fields may
// contain commas, quotes ("") and newlines.

#include <istream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "paydev/error.hpp"

namespace paydev::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

inline Table parse(std::string_view data, const std::string& source = "csv") {
  Table table;
  std::vector<Row> records;
  std::vector<std::size_t> lines;
  Row row;
  std::string field;
  bool in_quotes = false, field_started = false, row_has_content = false;
  std::size_t line = 1, row_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (row_has_content || row.size() > 1) {
      records.push_back(std::move(row));
      lines.push_back(row_line);
    }
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (!row_has_content && row.empty() && field.empty()) row_line = line;
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw Error(ErrorCode::schema, source + ":" + std::to_string(line) + ": stray quote");
        in_quotes = true;
        field_started = true;
        row_has_content = true;
        break;
      case ',':
        end_field();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        row_has_content = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::schema, source + ": unterminated quoted field");
  if (row_has_content || !field.empty() || !row.empty()) end_row();

  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size())
      throw Error(ErrorCode::schema, source + ":" + std::to_string(lines[i]) + ": expected " +
                                         std::to_string(table.header.size()) + " fields, got " +
                                         std::to_string(records[i].size()));
    table.rows.push_back(std::move(records[i]));
    table.line_numbers.push_back(lines[i]);
  }
  return table;
}

inline Table parse(std::istream& in, const std::string& source = "csv") {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse(std::string_view(data), source);
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join(const Row& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

inline void expect_header(const Table& t, const Row& expected, const std::string& source) {
  if (t.header != expected)
    throw Error(ErrorCode::schema, source + ": expected header `" + join(expected) + "`, got `" +
                                       join(t.header) + "`");
}

}  // namespace paydev::csv
