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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

// Plain tabular datasets and their CSV / JSON renderings.
namespace qotto::expcli {

// Empty cells render as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws std::invalid_argument if the row width differs from the column count.
  void add_row(std::vector<Cell> row);
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

struct Dataset {
  // Ordered key/value metadata (config hash, seed, version, ...).
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<Table> tables;

  [[nodiscard]] const Table& table(std::string_view name) const;
};

enum class Format { csv, json };

/// CSV: '#'-prefixed header lines, then per table a "# table: <name>" line,
/// the column line and the rows; tables are separated by a blank line.
/// Doubles are printed with 15 significant digits.
void write_csv(std::ostream& out, const Dataset& data);

// {"header": {...}, "tables": {"<name>": [{column: value, ...}, ...]}}.
void write_json(std::ostream& out, const Dataset& data);

void write(std::ostream& out, const Dataset& data, Format format);

// 15-significant-digit rendering shared by both writers.
[[nodiscard]] std::string format_double(double v);

// 64-bit FNV-1a, rendered as 16 hex digits by hash_hex.
[[nodiscard]] std::uint64_t fnv1a(std::string_view text);
[[nodiscard]] std::string hash_hex(std::uint64_t h);

}  // namespace qotto::expcli
