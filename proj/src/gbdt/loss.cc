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

#include "fraudstack/gbdt/loss.h"

#include <cmath>

#include "fraudstack/gbdt/model.h"

namespace fraudstack::gbdt {

double logloss(int y, double margin, double weight) {
  // log(1 + e^m) - y m, evaluated without overflow.
  const double softplus =
      margin > 0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
  return weight * (softplus - y * margin);
}

GradHess logloss_grad_hess(int y, double margin, double weight) {
  const double p = sigmoid(margin);
  return {weight * (p - y), weight * p * (1.0 - p)};
}

double mean_logloss(std::span<const int> y, std::span<const double> margins,
                    std::span<const double> weights) {
  double total = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += logloss(y[i], margins[i], weights[i]);
    weight_sum += weights[i];
  }
  return weight_sum > 0 ? total / weight_sum : 0.0;
}

}  // namespace fraudstack::gbdt
