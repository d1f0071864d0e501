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

#ifndef FRAUDSTACK_COMMON_MATRIX_H_
#define FRAUDSTACK_COMMON_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fraudstack {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  void append_row(std::span<const double> values);

  Matrix select_rows(std::span<const std::size_t> indices) const;
  Matrix select_columns(std::span<const std::size_t> indices) const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Feature matrix with binary labels and column names; the unit passed between
// preprocessing, resampling and model training.
struct Dataset {
  Matrix x;
  std::vector<int> y;
  std::vector<std::string> feature_names;

  std::size_t size() const { return y.size(); }
  Dataset subset(std::span<const std::size_t> rows) const;
};

// Returns the column indices of `wanted` inside `available`. Throws an Error
// listing every missing name.
std::vector<std::size_t> resolve_columns(
    std::span<const std::string> available, std::span<const std::string> wanted);

}  // namespace fraudstack

#endif  // FRAUDSTACK_COMMON_MATRIX_H_
