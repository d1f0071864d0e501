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

#include "fraudstack/gbdt/split.h"

#include <vector>

namespace fraudstack::gbdt {

double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, double lambda, double gamma) {
  const double g = grad_left + grad_right;
  const double h = hess_left + hess_right;
  return 0.5 * (grad_left * grad_left / (hess_left + lambda) +
                grad_right * grad_right / (hess_right + lambda) - g * g / (h + lambda)) -
         gamma;
}

std::optional<SplitCandidate> best_split(std::span<const double> grad_hist,
                                         std::span<const double> hess_hist,
                                         double lambda, double gamma,
                                         double min_child_weight) {
  const std::size_t n = grad_hist.size();
  // Right-hand sums are accumulated from the top so an empty side is exactly 0.
  std::vector<double> grad_suffix(n + 1, 0.0), hess_suffix(n + 1, 0.0);
  for (std::size_t b = n; b-- > 0;) {
    grad_suffix[b] = grad_suffix[b + 1] + grad_hist[b];
    hess_suffix[b] = hess_suffix[b + 1] + hess_hist[b];
  }
  std::optional<SplitCandidate> best;
  double grad_left = 0.0;
  double hess_left = 0.0;
  for (std::size_t b = 1; b < n; ++b) {
    grad_left += grad_hist[b - 1];
    hess_left += hess_hist[b - 1];
    const double grad_right = grad_suffix[b];
    const double hess_right = hess_suffix[b];
    if (!(hess_left > 0.0) || !(hess_right > 0.0)) continue;
    if (hess_left < min_child_weight || hess_right < min_child_weight) continue;
    const double gain =
        split_gain(grad_left, hess_left, grad_right, hess_right, lambda, gamma);
    if (gain > 0.0 && (!best || gain > best->gain)) {
      best = SplitCandidate{b, gain, grad_left, hess_left, grad_right, hess_right};
    }
  }
  return best;
}

}  // namespace fraudstack::gbdt
