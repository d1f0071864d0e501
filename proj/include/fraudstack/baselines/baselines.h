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

#ifndef FRAUDSTACK_BASELINES_BASELINES_H_
#define FRAUDSTACK_BASELINES_BASELINES_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudstack/common/matrix.h"
#include "fraudstack/gbdt/model.h"

namespace fraudstack::baselines {

// Logistic regression on standardized features.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;
  // Constant columns get scale 1.
  std::vector<double> scale;
  std::vector<std::string> feature_names;
  double l2 = 0.0;
  int iterations = 0;
  bool converged = false;

  double predict_margin(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const;
  std::vector<double> predict_proba(const Matrix& x) const;
};

struct LogregOptions {
  double l2 = 1e-3;
  int max_iters = 500;
  // Gradient infinity-norm at which descent stops.
  double tol = 1e-6;
};

// theta = [bias, w_1 .. w_d] over an already standardized matrix z.
// J = mean log-loss + l2 / 2 * |w|^2 (the bias is not penalized).
double logreg_objective(const Matrix& z, std::span<const int> y, double l2,
                        std::span<const double> theta);
std::vector<double> logreg_gradient(const Matrix& z, std::span<const int> y, double l2,
                                    std::span<const double> theta);

// Gradient descent with Armijo backtracking from all-zero parameters.
LinearModel train_logreg(const Matrix& x, std::span<const int> y, const LogregOptions& options,
                         std::vector<std::string> feature_names = {});

// A single depth-wise tree with learning rate 1 and no sampling, returned as
// a one-tree GbdtModel.
gbdt::GbdtModel train_decision_tree(const Matrix& x, std::span<const int> y, int max_depth,
                                    std::vector<std::string> feature_names = {},
                                    std::uint64_t seed = 0);

nlohmann::json to_json(const LinearModel& model);
LinearModel linear_from_json(const nlohmann::json& doc);
void save_linear(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_linear(const std::filesystem::path& path);

}  // namespace fraudstack::baselines

#endif  // FRAUDSTACK_BASELINES_BASELINES_H_
