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

#ifndef FRAUDSTACK_DATA_TABLE_H_
#define FRAUDSTACK_DATA_TABLE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraudstack/common/matrix.h"
#include "fraudstack/data/schema.h"

namespace fraudstack::data {

// One column of values with an explicit missing mask. Storage is either
// numeric (missing slots hold NaN) or text (missing slots hold "").
class Column {
 public:
  static Column numeric(std::vector<double> values, std::vector<std::uint8_t> missing);
  static Column numeric(std::vector<double> values);  // no missing entries
  static Column text(std::vector<std::string> values, std::vector<std::uint8_t> missing);
  static Column all_missing(bool text, std::size_t n);

  bool is_text() const { return is_text_; }
  std::size_t size() const { return missing_.size(); }
  bool is_missing(std::size_t i) const { return missing_[i] != 0; }
  std::size_t missing_count() const;

  const std::vector<double>& numbers() const { return numbers_; }
  const std::vector<std::string>& strings() const { return strings_; }
  const std::vector<std::uint8_t>& missing() const { return missing_; }

  Column select(std::span<const std::size_t> rows) const;

  friend bool operator==(const Column& a, const Column& b);

 private:
  bool is_text_ = false;
  std::vector<double> numbers_;
  std::vector<std::string> strings_;
  std::vector<std::uint8_t> missing_;
};

// Immutable columnar table. Every operation on it returns a new table.
class Table {
 public:
  Table() = default;
  Table(Schema schema, std::vector<Column> columns, std::size_t n_rows);

  const Schema& schema() const { return schema_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_columns() const { return columns_.size(); }

  const Column& column(std::size_t i) const { return columns_[i]; }
  const Column& column(std::string_view name) const;
  const std::vector<Column>& columns() const { return columns_; }

  Table select_rows(std::span<const std::size_t> rows) const;

  // Binary labels of the target column. Throws unless every target value is
  // 0 or 1.
  std::vector<int> labels() const;

  // Numeric feature matrix of every non-key, non-target column plus labels.
  // Requires numeric storage and no missing values in feature columns.
  Dataset to_dataset() const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

// Inverse of Table::to_dataset for numeric tables: feature columns followed
// by a target column.
Table table_from_dataset(const Dataset& dataset, const std::string& target_name);

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_TABLE_H_
