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

#ifndef FRAUDSTACK_DATA_PREPROCESS_H_
#define FRAUDSTACK_DATA_PREPROCESS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudstack/data/table.h"

namespace fraudstack::data {

inline constexpr std::string_view kAllMissingCategory = "__ALL_MISSING__";

// Keeps every left row in order and appends the right table's non-key
// columns; left rows without a match get missing right fields. Right keys must
// be unique.
Table left_join(const Table& left, const Table& right, std::string_view key);

Table drop_columns(const Table& table, std::span<const std::string> names);

// Numeric gaps take the lower median, categorical gaps the modal category
// (lexicographically smallest on ties). Key and target columns are untouched.
Table impute(const Table& table);

// Category-to-code mapping for every categorical column.
class EncodingMap {
 public:
  struct Codes {
    std::vector<std::string> categories;  // index = code
    std::unordered_map<std::string, std::int64_t> lookup;
  };

  void add_column(const std::string& column, std::vector<std::string> categories);

  bool has_column(std::string_view column) const;
  // Codes are dense from 0; any unseen category maps to unseen_code().
  std::int64_t encode(std::string_view column, const std::string& category) const;
  std::int64_t unseen_code(std::string_view column) const;
  const std::string& decode(std::string_view column, std::int64_t code) const;

  // Encodes the categorical text columns of `table` with this map.
  Table apply(const Table& table) const;

  nlohmann::json to_json() const;
  static EncodingMap from_json(const nlohmann::json& doc);

  const std::map<std::string, Codes, std::less<>>& columns() const { return columns_; }

 private:
  const Codes& codes(std::string_view column) const;

  std::map<std::string, Codes, std::less<>> columns_;
};

// Replaces each categorical text column by integer codes in first-appearance
// order.
std::pair<Table, EncodingMap> label_encode(const Table& table);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-class test counts follow largest-remainder allocation of
// round(n * test_fraction), so each class lands within one row of
// class_count * test_fraction. Indices are returned in ascending order.
SplitIndices stratified_split_indices(std::span<const int> labels,
                                      double test_fraction, std::uint64_t seed);

// Returns (train, test).
std::pair<Table, Table> stratified_split(const Table& table, double test_fraction,
                                         std::uint64_t seed);

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_PREPROCESS_H_
