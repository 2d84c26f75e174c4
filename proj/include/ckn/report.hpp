#pragma once

// Row tables with lossless CSV and JSON output.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ckn/error.hpp"

namespace ckn {

using Cell = std::variant<std::string, double, long long, bool>;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    require(row.size() == columns.size(), ErrorKind::InvalidParameter, "row width does not match the header");
    rows.push_back(std::move(row));
  }

  static std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  static std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return csv_field(*s);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
  }

  void write_csv(std::ostream& os) const {
    for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << csv_field(columns[j]);
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << cell_text(row[j]);
      os << '\n';
    }
  }

  // Non-finite doubles are written as strings so the document stays valid JSON.
  nlohmann::json to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t j = 0; j < row.size(); ++j) {
        const Cell& c = row[j];
        if (const auto* s = std::get_if<std::string>(&c)) {
          obj[columns[j]] = *s;
        } else if (const auto* d = std::get_if<double>(&c)) {
          if (std::isfinite(*d)) {
            obj[columns[j]] = *d;
          } else {
            obj[columns[j]] = format_double(*d);
          }
        } else if (const auto* i = std::get_if<long long>(&c)) {
          obj[columns[j]] = *i;
        } else {
          obj[columns[j]] = std::get<bool>(c);
        }
      }
      out.push_back(std::move(obj));
    }
    return out;
  }
};

struct Report {
  std::string command;
  Table table;

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      nlohmann::json doc;
      doc["command"] = command;
      doc["columns"] = table.columns;
      doc["rows"] = table.to_json();
      os << doc.dump(2) << '\n';
    } else {
      table.write_csv(os);
    }
  }
};

}  // namespace ckn
