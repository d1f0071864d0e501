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

#include "fraudstack/common/matrix.h"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(fmt::format("matrix data has {} values, expected {}x{}",
                            data_.size(), rows_, cols_));
  }
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] = values[r];
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(fmt::format("row width {} does not match matrix width {}",
                            values.size(), cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
  Matrix out(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      out(r, j) = (*this)(r, indices[j]);
    }
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.x = x.select_rows(rows);
  out.y.reserve(rows.size());
  for (std::size_t r : rows) out.y.push_back(y[r]);
  out.feature_names = feature_names;
  return out;
}

std::vector<std::size_t> resolve_columns(std::span<const std::string> available,
                                         std::span<const std::string> wanted) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < available.size(); ++i) position[available[i]] = i;
  std::vector<std::size_t> out;
  std::vector<std::string> missing;
  for (const auto& name : wanted) {
    auto it = position.find(name);
    if (it == position.end()) {
      missing.push_back(name);
    } else {
      out.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    std::vector<std::string> extra;
    std::unordered_map<std::string, bool> wanted_set;
    for (const auto& name : wanted) wanted_set[name] = true;
    for (const auto& name : available) {
      if (!wanted_set.contains(name)) extra.push_back(name);
    }
    throw Error(fmt::format(
        "feature mismatch: expected but not found [{}]; found but not expected "
        "[{}]",
        fmt::join(missing, ", "), fmt::join(extra, ", ")));
  }
  return out;
}

}  // namespace fraudstack
