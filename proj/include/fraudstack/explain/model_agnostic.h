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

#ifndef FRAUDSTACK_EXPLAIN_MODEL_AGNOSTIC_H_
#define FRAUDSTACK_EXPLAIN_MODEL_AGNOSTIC_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraudstack/common/matrix.h"

namespace fraudstack::explain {

// Fraud probability for every row of a matrix.
using PredictFn = std::function<std::vector<double>(const Matrix&)>;

struct LimeOptions {
  int n_samples = 5000;
  // Kernel width on the standardized scale; <= 0 selects 0.75 * sqrt(d).
  double kernel_width = 0.0;
  std::uint64_t seed = 0;
};

struct LimeSamples {
  // Row 0 is the explained instance.
  Matrix samples;
  // (samples - train mean) / train std; constant features use std 1.
  Matrix standardized;
  std::vector<double> weights;
  std::vector<double> targets;
  double kernel_width = 0.0;
};

struct LimeExplanation {
  double intercept = 0.0;
  // Coefficients on the standardized feature scale.
  std::vector<double> weights;
  double local_r2 = 0.0;
  double predicted_proba = 0.0;
  double kernel_width = 0.0;
  std::vector<std::string> feature_names;
};

// Each perturbed sample replaces every feature, independently with
// probability 0.5, by the value of a random training row.
LimeSamples lime_samples(const PredictFn& predict, std::span<const double> x,
                         const Matrix& train, const LimeOptions& options);

// Weighted least squares on the samples with 1e-6 ridge damping on the
// coefficients. Throws when the kernel leaves no weight on perturbed samples.
LimeExplanation lime_fit(const LimeSamples& samples);

LimeExplanation lime_explain(const PredictFn& predict, std::span<const double> x,
                             const Matrix& train, const LimeOptions& options,
                             std::vector<std::string> feature_names = {});

struct PdpCurve {
  std::size_t feature = 0;
  std::string name;
  // Distinct quantiles of the feature, strictly increasing.
  std::vector<double> grid;
  std::vector<double> mean_prediction;
};

// Quantile levels i / (n_grid - 1), linear interpolation between order
// statistics. A constant feature gives a single grid point.
std::vector<double> quantile_grid(std::vector<double> values, int n_grid);

PdpCurve pdp(const PredictFn& predict, const Matrix& x, std::size_t feature, int n_grid = 20,
             std::string name = {});

enum class PfiMetric { kAuc, kF1 };
std::string_view to_string(PfiMetric metric);
PfiMetric pfi_metric_from_string(std::string_view text);

struct PfiOptions {
  PfiMetric metric = PfiMetric::kAuc;
  int n_repeats = 5;
  std::uint64_t seed = 0;
  // Decision cutoff for the F1 metric.
  double threshold = 0.5;
};

struct PfiEntry {
  std::size_t feature = 0;
  std::string name;
  double mean_drop = 0.0;
  double std = 0.0;
  std::vector<double> drops;
};

struct PfiResult {
  double baseline = 0.0;
  // One entry per feature, in column order.
  std::vector<PfiEntry> features;

  // Entries sorted by mean drop descending, ties by feature index.
  std::vector<PfiEntry> ranked() const;
};

PfiResult permutation_importance(const PredictFn& predict, const Matrix& x,
                                 std::span<const int> y, const PfiOptions& options,
                                 std::vector<std::string> feature_names = {});

void write_lime_json(const LimeExplanation& explanation, const std::filesystem::path& path);
void write_pdp_csv(const PdpCurve& curve, const std::filesystem::path& path);
void write_pfi_csv(const PfiResult& result, const std::filesystem::path& path);

}  // namespace fraudstack::explain

#endif  // FRAUDSTACK_EXPLAIN_MODEL_AGNOSTIC_H_
