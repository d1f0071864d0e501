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

#ifndef FRAUDSTACK_GBDT_LOSS_H_
#define FRAUDSTACK_GBDT_LOSS_H_

#include <span>

namespace fraudstack::gbdt {

struct GradHess {
  double grad;
  double hess;
};

// Weighted binary log-loss of a log-odds margin: w * -[y log p + (1-y) log(1-p)].
double logloss(int y, double margin, double weight);

// First and second derivative of logloss with respect to the margin:
// g = w (p - y), h = w p (1 - p) with p = sigmoid(margin).
GradHess logloss_grad_hess(int y, double margin, double weight);

// Mean weighted log-loss over a dataset.
double mean_logloss(std::span<const int> y, std::span<const double> margins,
                    std::span<const double> weights);

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_LOSS_H_
