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

#ifndef FRAUDSTACK_RESAMPLE_SMOTE_H_
#define FRAUDSTACK_RESAMPLE_SMOTE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fraudstack/common/matrix.h"

namespace fraudstack::resample {

struct SmoteConfig {
  int k_neighbors = 5;
  // Minority/majority ratio after resampling, in (0, 1].
  double target_ratio = 1.0;
  std::uint64_t seed = 0;
  // Measure neighbor distances on min-max scaled features instead of raw
  // encoded values. Synthetic points are still interpolated in raw space.
  bool scale_features = false;
  int jobs = 1;

  void validate() const;
};

struct SmoteResult {
  Matrix x;
  std::vector<int> y;
  // For each appended synthetic row: the minority base row, the neighbor it
  // was interpolated toward, and the interpolation factor.
  struct Origin {
    std::size_t base;
    std::size_t neighbor;
    double u;
  };
  std::vector<Origin> origins;
};

// Classic SMOTE. Original rows come first and unchanged; synthetic minority
// rows s = x_i + u * (x_j - x_i) are appended, with x_j drawn from the k
// nearest minority neighbors of x_i (Euclidean, ties by row index) and a
// single u ~ U[0, 1] per row. Base rows cycle through the minority rows in
// index order.
SmoteResult smote(const Matrix& x, std::span<const int> y, const SmoteConfig& config);

// Convenience wrapper keeping feature names.
Dataset smote(const Dataset& data, const SmoteConfig& config);

}  // namespace fraudstack::resample

#endif  // FRAUDSTACK_RESAMPLE_SMOTE_H_
