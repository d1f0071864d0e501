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

#ifndef FRAUDSTACK_EXPLAIN_SHAP_H_
#define FRAUDSTACK_EXPLAIN_SHAP_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fraudstack/common/matrix.h"
#include "fraudstack/gbdt/model.h"

namespace fraudstack::explain {

// Attributions in log-odds units.
struct ShapValues {
  std::vector<double> phi;
  // Expected margin under the cover distribution of every tree.
  double base_value = 0.0;
  std::vector<std::string> feature_names;
};

// Path-dependent TreeSHAP: a feature outside the coalition follows both
// children weighted by their share of the parent's cover.
ShapValues tree_shap(const gbdt::GbdtModel& model, std::span<const double> x);

// Brute force over all 2^n coalitions using the same cover-weighted
// conditional expectation. Limited to 12 features.
ShapValues exact_shapley_oracle(const gbdt::GbdtModel& model, std::span<const double> x);

struct FeatureImportance {
  std::size_t feature = 0;
  std::string name;
  double mean_abs = 0.0;
  // Distribution of the signed values over the explained rows.
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Mean |phi| per feature over the rows of x, sorted descending with ties by
// feature index.
std::vector<FeatureImportance> shap_summary(const gbdt::GbdtModel& model, const Matrix& x,
                                            int jobs = 1);

// Names of the first k ranked features.
std::vector<std::string> select_top_k(std::span<const FeatureImportance> ranking,
                                      std::size_t k = 30);

// feature,mean_abs_shap,rank plus the distribution columns.
void write_shap_summary_csv(std::span<const FeatureImportance> ranking,
                            const std::filesystem::path& path);
void write_shap_values_json(const ShapValues& values, double margin,
                            const std::filesystem::path& path);

}  // namespace fraudstack::explain

#endif  // FRAUDSTACK_EXPLAIN_SHAP_H_
