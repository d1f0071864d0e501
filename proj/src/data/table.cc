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

#include "fraudstack/data/table.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::data {

Column Column::numeric(std::vector<double> values, std::vector<std::uint8_t> missing) {
  if (values.size() != missing.size()) {
    throw Error("column values and missing mask differ in length");
  }
  Column c;
  c.numbers_ = std::move(values);
  c.missing_ = std::move(missing);
  for (std::size_t i = 0; i < c.missing_.size(); ++i) {
    if (c.missing_[i]) c.numbers_[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

Column Column::numeric(std::vector<double> values) {
  std::vector<std::uint8_t> missing(values.size(), 0);
  return numeric(std::move(values), std::move(missing));
}

Column Column::text(std::vector<std::string> values, std::vector<std::uint8_t> missing) {
  if (values.size() != missing.size()) {
    throw Error("column values and missing mask differ in length");
  }
  Column c;
  c.is_text_ = true;
  c.strings_ = std::move(values);
  c.missing_ = std::move(missing);
  for (std::size_t i = 0; i < c.missing_.size(); ++i) {
    if (c.missing_[i]) c.strings_[i].clear();
  }
  return c;
}

Column Column::all_missing(bool text, std::size_t n) {
  if (text) return Column::text(std::vector<std::string>(n), std::vector<std::uint8_t>(n, 1));
  return Column::numeric(std::vector<double>(n), std::vector<std::uint8_t>(n, 1));
}

std::size_t Column::missing_count() const {
  std::size_t n = 0;
  for (auto m : missing_) n += m != 0;
  return n;
}

Column Column::select(std::span<const std::size_t> rows) const {
  Column out;
  out.is_text_ = is_text_;
  out.missing_.reserve(rows.size());
  for (std::size_t r : rows) out.missing_.push_back(missing_[r]);
  if (is_text_) {
    out.strings_.reserve(rows.size());
    for (std::size_t r : rows) out.strings_.push_back(strings_[r]);
  } else {
    out.numbers_.reserve(rows.size());
    for (std::size_t r : rows) out.numbers_.push_back(numbers_[r]);
  }
  return out;
}

bool operator==(const Column& a, const Column& b) {
  if (a.is_text_ != b.is_text_ || a.missing_ != b.missing_) return false;
  if (a.is_text_) return a.strings_ == b.strings_;
  for (std::size_t i = 0; i < a.numbers_.size(); ++i) {
    if (a.missing_[i]) continue;
    if (a.numbers_[i] != b.numbers_[i]) return false;
  }
  return true;
}

Table::Table(Schema schema, std::vector<Column> columns, std::size_t n_rows)
    : schema_(std::move(schema)), columns_(std::move(columns)), n_rows_(n_rows) {
  if (schema_.size() != columns_.size()) {
    throw Error(fmt::format("schema has {} columns but {} were supplied",
                            schema_.size(), columns_.size()));
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != n_rows_) {
      throw Error(fmt::format("column '{}' has {} rows, expected {}",
                              schema_[i].name, columns_[i].size(), n_rows_));
    }
  }
}

const Column& Table::column(std::string_view name) const {
  return columns_[schema_.index_of(name)];
}

Table Table::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.select(rows));
  return Table(schema_, std::move(out), rows.size());
}

std::vector<int> Table::labels() const {
  const auto target = schema_.target_index();
  if (!target) throw Error("table has no target column");
  const Column& c = columns_[*target];
  if (c.is_text()) throw Error("target column must be numeric");
  std::vector<int> y(n_rows_);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    const double v = c.numbers()[i];
    if (c.is_missing(i) || (v != 0.0 && v != 1.0)) {
      throw Error(fmt::format("target value at row {} is not 0 or 1", i));
    }
    y[i] = static_cast<int>(v);
  }
  return y;
}

Dataset Table::to_dataset() const {
  std::vector<std::size_t> features;
  Dataset out;
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    const auto kind = schema_[i].kind;
    if (kind == ColumnKind::kKey || kind == ColumnKind::kTarget) continue;
    if (columns_[i].is_text()) {
      throw Error(fmt::format("column '{}' is not encoded", schema_[i].name));
    }
    if (columns_[i].missing_count() > 0) {
      throw Error(fmt::format("column '{}' has missing values", schema_[i].name));
    }
    features.push_back(i);
    out.feature_names.push_back(schema_[i].name);
  }
  out.x = Matrix(n_rows_, features.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    out.x.set_column(j, columns_[features[j]].numbers());
  }
  out.y = schema_.target_index() ? labels() : std::vector<int>{};
  return out;
}

Table table_from_dataset(const Dataset& dataset, const std::string& target_name) {
  std::vector<ColumnSpec> specs;
  std::vector<Column> columns;
  for (std::size_t j = 0; j < dataset.feature_names.size(); ++j) {
    specs.push_back({dataset.feature_names[j], ColumnKind::kNumeric});
    columns.push_back(Column::numeric(dataset.x.column(j)));
  }
  specs.push_back({target_name, ColumnKind::kTarget});
  columns.push_back(Column::numeric(std::vector<double>(dataset.y.begin(), dataset.y.end())));
  return Table(Schema(std::move(specs)), std::move(columns), dataset.size());
}

}  // namespace fraudstack::data
