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

#ifndef FRAUDSTACK_GBDT_TRAINER_H_
#define FRAUDSTACK_GBDT_TRAINER_H_

#include <span>
#include <string>
#include <vector>

#include "fraudstack/common/matrix.h"
#include "fraudstack/gbdt/config.h"
#include "fraudstack/gbdt/model.h"

namespace fraudstack::gbdt {

struct TrainingTrace {
  // Mean weighted training log-loss before the first tree and after each
  // boosting round.
  std::vector<double> loss;
};

// Boosts `config.n_estimators` trees on the logistic loss. Positive rows are
// weighted by scale_pos_weight. Deterministic for a fixed config.seed.
GbdtModel train(const Matrix& x, std::span<const int> y, const GbdtConfig& config,
                std::vector<std::string> feature_names = {},
                TrainingTrace* trace = nullptr);

GbdtModel train(const Dataset& data, const GbdtConfig& config,
                TrainingTrace* trace = nullptr);

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_TRAINER_H_
