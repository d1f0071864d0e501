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

#ifndef FRAUDSTACK_GBDT_SPLIT_H_
#define FRAUDSTACK_GBDT_SPLIT_H_

#include <cstddef>
#include <optional>
#include <span>

namespace fraudstack::gbdt {

struct SplitCandidate {
  // Bins [0, bin) go left, [bin, n_bins) go right.
  std::size_t bin = 0;
  double gain = 0.0;
  double grad_left = 0.0;
  double hess_left = 0.0;
  double grad_right = 0.0;
  double hess_right = 0.0;
};

// Second-order gain of splitting (G, H) into left/right parts, minus gamma:
//   1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma
double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, double lambda, double gamma);

// Best boundary of a per-bin gradient/hessian histogram. Both children need a
// positive hessian of at least `min_child_weight`. Ties keep the lowest bin.
// Returns nullopt when no boundary has positive gain.
std::optional<SplitCandidate> best_split(std::span<const double> grad_hist,
                                         std::span<const double> hess_hist,
                                         double lambda, double gamma,
                                         double min_child_weight = 0.0);

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_SPLIT_H_
