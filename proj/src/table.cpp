// Copyright 2026 The qotto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qotto/table.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qotto::expcli {
namespace {

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(const std::string& s) const {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
};

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          // Round-trip through the CSV rendering so both formats agree.
          return std::stod(format_double(v));
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table '" + name + "': row has " + std::to_string(row.size()) +
                                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column(std::string_view col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw std::out_of_range("table '" + name + "' has no column '" + std::string(col) + "'");
}

const Table& Dataset::table(std::string_view name) const {
  for (const Table& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("dataset has no table '" + std::string(name) + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (const auto& [k, v] : data.header) out << "# " << k << ": " << v << '\n';
  bool first = true;
  for (const Table& t : data.tables) {
    if (!first) out << '\n';
    first = false;
    out << "# table: " << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
      }
      out << '\n';
    }
  }
}

void write_json(std::ostream& out, const Dataset& data) {
  nlohmann::ordered_json doc;
  doc["header"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : data.header) doc["header"][k] = v;
  doc["tables"] = nlohmann::ordered_json::object();
  for (const Table& t : data.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    doc["tables"][t.name] = std::move(rows);
  }
  out << doc.dump(2) << '\n';
}

void write(std::ostream& out, const Dataset& data, Format format) {
  if (format == Format::json) {
    write_json(out, data);
  } else {
    write_csv(out, data);
  }
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace qotto::expcli
