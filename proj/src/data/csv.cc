/*
 * Copyright 2026 The fraudstack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fraudstack/data/csv.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::data {
namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return in;
}

bool parse_number(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && *(end - 1) == ' ') --end;
  if (begin < end && *begin == '+') ++begin;
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> CsvReader::next() {
  std::streambuf* buf = in_.rdbuf();
  if (buf->sgetc() == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = current_line_;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (;;) {
    const int ch = buf->sbumpc();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) {
        throw Error(fmt::format("line {}: unterminated quoted field", record_line_));
      }
      fields.push_back(std::move(field));
      return fields;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (buf->sgetc() == '"') {
          buf->sbumpc();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++current_line_;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          quoted = true;
          field_was_quoted = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        if (buf->sgetc() == '\n') buf->sbumpc();
        [[fallthrough]];
      case '\n':
        ++current_line_;
        fields.push_back(std::move(field));
        return fields;
      default:
        field.push_back(c);
    }
  }
}

std::vector<std::string> read_csv_header(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw Error(fmt::format("'{}' is empty", path.string()));
  return *header;
}

Table load_csv(const std::filesystem::path& path, const Schema& schema,
               const std::vector<std::string>& na_tokens) {
  auto in = open_or_throw(path);
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw Error(fmt::format("'{}' is empty", path.string()));

  const std::set<std::string> file_names(header->begin(), header->end());
  std::set<std::string> schema_names;
  for (const auto& c : schema.columns()) schema_names.insert(c.name);
  if (file_names.size() != header->size() || file_names != schema_names) {
    std::vector<std::string> absent, unexpected;
    std::set_difference(schema_names.begin(), schema_names.end(), file_names.begin(),
                        file_names.end(), std::back_inserter(absent));
    std::set_difference(file_names.begin(), file_names.end(), schema_names.begin(),
                        schema_names.end(), std::back_inserter(unexpected));
    throw Error(fmt::format(
        "'{}': header does not match schema (missing [{}], unexpected [{}]{})",
        path.string(), fmt::join(absent, ", "), fmt::join(unexpected, ", "),
        file_names.size() != header->size() ? ", duplicate names" : ""));
  }

  const std::unordered_set<std::string> na(na_tokens.begin(), na_tokens.end());
  const std::size_t width = header->size();
  std::vector<std::size_t> slot(width);
  for (std::size_t i = 0; i < width; ++i) slot[i] = schema.index_of((*header)[i]);

  const std::size_t n_cols = schema.size();
  std::vector<bool> is_text(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const auto kind = schema[c].kind;
    is_text[c] = kind == ColumnKind::kCategorical || kind == ColumnKind::kKey;
  }
  std::vector<std::vector<double>> numbers(n_cols);
  std::vector<std::vector<std::string>> strings(n_cols);
  std::vector<std::vector<std::uint8_t>> missing(n_cols);

  std::size_t n_rows = 0;
  while (auto record = reader.next()) {
    if (record->size() == 1 && (*record)[0].empty() && width != 1) continue;
    if (record->size() != width) {
      throw Error(fmt::format("'{}' line {}: expected {} fields, found {}",
                              path.string(), reader.line(), width, record->size()));
    }
    for (std::size_t i = 0; i < width; ++i) {
      const std::size_t c = slot[i];
      std::string& cell = (*record)[i];
      bool absent = na.contains(cell);
      if (is_text[c]) {
        strings[c].push_back(absent ? std::string() : std::move(cell));
      } else {
        double v = 0.0;
        if (!absent && !parse_number(cell, v)) absent = true;
        numbers[c].push_back(absent ? 0.0 : v);
      }
      missing[c].push_back(absent ? 1 : 0);
    }
    ++n_rows;
  }

  std::vector<Column> columns;
  columns.reserve(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    columns.push_back(is_text[c] ? Column::text(std::move(strings[c]), std::move(missing[c]))
                                 : Column::numeric(std::move(numbers[c]), std::move(missing[c])));
  }
  return Table(schema, std::move(columns), n_rows);
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  const auto& specs = table.schema().columns();
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (c) out << ',';
    out << quote_if_needed(specs[c].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < specs.size(); ++c) {
      if (c) out << ',';
      const Column& col = table.column(c);
      if (col.is_missing(r)) continue;
      if (col.is_text()) {
        out << quote_if_needed(col.strings()[r]);
      } else {
        out << fmt::format("{}", col.numbers()[r]);
      }
    }
    out << '\n';
  }
}

}  // namespace fraudstack::data
