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

#ifndef FRAUDSTACK_GBDT_BINNING_H_
#define FRAUDSTACK_GBDT_BINNING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fraudstack/common/matrix.h"

namespace fraudstack::gbdt {

using BinIndex = std::uint16_t;

// Per-feature quantile cut points. Feature j has cuts(j).size() + 1 bins and
// bin(x) = number of cuts <= x, so x < cuts(j)[b - 1] exactly when
// bin(x) < b. When a feature has no more distinct values than n_bins each
// distinct value gets its own bin and the cuts are the distinct values above
// the minimum.
class BinMapper {
 public:
  static BinMapper fit(const Matrix& x, int n_bins);

  std::size_t n_features() const { return cuts_.size(); }
  std::size_t n_bins(std::size_t feature) const { return cuts_[feature].size() + 1; }
  const std::vector<double>& cuts(std::size_t feature) const { return cuts_[feature]; }

  BinIndex bin(std::size_t feature, double value) const;
  // Threshold separating bins [0, b) from [b, n_bins).
  double threshold(std::size_t feature, std::size_t b) const { return cuts_[feature][b - 1]; }

  // Column-major bin codes: result[feature][row].
  std::vector<std::vector<BinIndex>> transform(const Matrix& x) const;

 private:
  std::vector<std::vector<double>> cuts_;
};

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_BINNING_H_
