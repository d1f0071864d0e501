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

#ifndef FRAUDSTACK_DATA_CSV_H_
#define FRAUDSTACK_DATA_CSV_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fraudstack/data/schema.h"
#include "fraudstack/data/table.h"

namespace fraudstack::data {

// RFC 4180 record reader: quoted fields, doubled quotes, embedded newlines,
// LF or CRLF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input.
  std::optional<std::vector<std::string>> next();
  // Physical line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t current_line_ = 1;
  std::size_t record_line_ = 0;
};

std::vector<std::string> read_csv_header(const std::filesystem::path& path);

// Loads a CSV whose header names match `schema` (any order). Cells equal to
// one of `na_tokens` and numeric cells that fail to parse are missing.
Table load_csv(const std::filesystem::path& path, const Schema& schema,
               const std::vector<std::string>& na_tokens = {"", "NaN", "NA"});

void write_csv(const std::filesystem::path& path, const Table& table);

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_CSV_H_
