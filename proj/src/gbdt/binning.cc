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

#include "fraudstack/gbdt/binning.h"

#include <algorithm>
#include <cmath>

#include "fraudstack/common/error.h"

namespace fraudstack::gbdt {

BinMapper BinMapper::fit(const Matrix& x, int n_bins) {
  if (n_bins < 2 || n_bins > 65536) throw Error("n_bins must be in [2, 65536]");
  BinMapper mapper;
  mapper.cuts_.resize(x.cols());
  std::vector<double> values;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    values.clear();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (!std::isnan(x(r, j))) values.push_back(x(r, j));
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    std::vector<double> distinct;
    std::unique_copy(values.begin(), values.end(), std::back_inserter(distinct));
    std::vector<double>& cuts = mapper.cuts_[j];
    if (distinct.size() <= static_cast<std::size_t>(n_bins)) {
      cuts.assign(distinct.begin() + 1, distinct.end());
      continue;
    }
    // Quantile cuts taken from the data; duplicates collapse.
    const std::size_t n = values.size();
    for (std::size_t q = 1; q < static_cast<std::size_t>(n_bins); ++q) {
      const double v = values[q * n / static_cast<std::size_t>(n_bins)];
      if (v > values.front() && (cuts.empty() || v > cuts.back())) cuts.push_back(v);
    }
  }
  return mapper;
}

BinIndex BinMapper::bin(std::size_t feature, double value) const {
  const auto& cuts = cuts_[feature];
  return static_cast<BinIndex>(std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

std::vector<std::vector<BinIndex>> BinMapper::transform(const Matrix& x) const {
  std::vector<std::vector<BinIndex>> out(x.cols(), std::vector<BinIndex>(x.rows()));
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t r = 0; r < x.rows(); ++r) out[j][r] = bin(j, x(r, j));
  }
  return out;
}

}  // namespace fraudstack::gbdt
