// Copyright 2026 The Polymerlab Authors
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

#ifndef POLYMER_REPORT_HPP
#define POLYMER_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace polymer {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<bool, std::int64_t, std::uint64_t, double, std::string>;

/// Column-ordered table. Rows must match the column count.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class ReportFormat : std::uint8_t { Csv, Jsonl };

ReportFormat parse_format(std::string_view text);

/// %.12g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

/// x rounded to 12 significant digits (what the text emitters print).
double round_significant(double x);

/// CSV: header line, then one line per row. JSONL: one object per row, keys in column order,
/// non-finite doubles as null. Output depends only on the table contents.
void emit_report(const ReportTable& table, ReportFormat format, std::ostream& out);

/// Writes to `path`, creating parent directories. Throws Error if the file cannot be written.
void emit_report(const ReportTable& table, ReportFormat format, const std::filesystem::path& path);

/// Parsed CSV; cells stay as text.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws Error if absent.
  std::size_t column(std::string_view name) const;
  /// Cell parsed as a double ("nan"/"inf" accepted, "true"/"false" map to 1/0).
  double number(std::size_t row, std::size_t col) const;
};

/// Reads CSV produced by emit_report (double-quoted fields with "" escapes).
CsvTable parse_csv(std::istream& in);

/// Recursively rounds every floating value to 12 significant digits, NaN/inf to null.
nlohmann::ordered_json canonical_json(nlohmann::ordered_json value);

/// Pretty JSON (2-space indent) of canonical_json(value), trailing newline.
void write_json(const nlohmann::ordered_json& value, const std::filesystem::path& path);
void write_json(const nlohmann::ordered_json& value, std::ostream& out);

}  // namespace polymer

#endif  // POLYMER_REPORT_HPP
