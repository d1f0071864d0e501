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

#include "fraudstack/resample/kfold.h"

#include <map>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"

namespace fraudstack::resample {

std::vector<std::size_t> FoldAssignment::train_rows(int f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::test_rows(int f) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) rows.push_back(i);
  }
  return rows;
}

FoldAssignment stratified_kfold(std::span<const int> y, int k, std::uint64_t seed) {
  if (k < 2) throw Error(fmt::format("fold count {} must be at least 2", k));
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < static_cast<std::size_t>(k)) {
      throw Error(fmt::format("class {} has {} rows, fewer than {} folds", label,
                              rows.size(), k));
    }
  }
  FoldAssignment out;
  out.k = k;
  out.fold.assign(y.size(), 0);
  Rng rng(seed);
  // The dealing position carries over between classes so fold sizes stay
  // balanced overall.
  std::size_t position = 0;
  for (auto& [label, rows] : by_class) {
    rng.shuffle(rows);
    for (std::size_t row : rows) {
      out.fold[row] = static_cast<int>(position % static_cast<std::size_t>(k));
      ++position;
    }
  }
  return out;
}

}  // namespace fraudstack::resample
