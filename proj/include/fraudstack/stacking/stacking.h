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

#ifndef FRAUDSTACK_STACKING_STACKING_H_
#define FRAUDSTACK_STACKING_STACKING_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudstack/common/matrix.h"
#include "fraudstack/gbdt/config.h"
#include "fraudstack/gbdt/model.h"
#include "fraudstack/resample/smote.h"

namespace fraudstack::stacking {

inline constexpr std::size_t kNumBases = 3;

// Meta-feature column names, one per base model.
const std::array<std::string, kNumBases>& meta_feature_names();

// Growth strategy required in each base slot.
gbdt::Growth base_growth(std::size_t slot);

struct StackingConfig {
  std::array<gbdt::GbdtConfig, kNumBases> base;
  gbdt::GbdtConfig meta;
  int folds = 5;
  std::uint64_t seed = 0;
  // Literal variant: meta-features are in-sample predictions of base
  // models trained on all rows.
  bool naive = false;
  // When set, every base training set (each fold and the final refit) is
  // oversampled with SMOTE. Meta-features are always computed on real rows.
  std::optional<resample::SmoteConfig> smote;
  // Fixed decision cutoff; when unset the F1-optimal cutoff over the
  // meta-model's predictions on the meta-training rows is used.
  std::optional<double> fixed_threshold;
  int jobs = 1;

  // Base slots with their growth set, meta with depth 2, 50 trees and no row
  // or column sampling.
  static StackingConfig defaults();
  void validate() const;
};

// Records where every meta-training value came from.
struct StackingTrace {
  // Fold that produced each row's meta-features.
  std::vector<int> row_fold;
  // Real rows each fold's base models were trained on.
  std::vector<std::vector<std::size_t>> fold_train_rows;
  // rows x 3 meta-training matrix.
  Matrix meta_features;
};

struct StackingModel {
  std::array<gbdt::GbdtModel, kNumBases> base;
  gbdt::GbdtModel meta;
  std::vector<std::string> selected_features;
  double threshold = 0.5;

  // `x` columns must already be in selected_features order.
  Matrix meta_features(const Matrix& x) const;
  std::vector<double> predict_proba(const Matrix& x) const;
  // Reorders columns by name first; throws listing missing columns.
  std::vector<double> predict_proba(const Matrix& x,
                                    std::span<const std::string> names) const;
  std::vector<int> classify(const Matrix& x) const;
  std::vector<int> classify(const Matrix& x, std::span<const std::string> names) const;
};

// Labels from probabilities with the >= rule.
std::vector<int> apply_threshold(std::span<const double> proba, double threshold);

// `data` must hold exactly the selected features.
StackingModel train_stacking(const Dataset& data, const StackingConfig& config,
                             StackingTrace* trace = nullptr);

nlohmann::json to_json(const StackingModel& model);
StackingModel from_json(const nlohmann::json& doc);
void save_stacking(const StackingModel& model, const std::filesystem::path& path);
StackingModel load_stacking(const std::filesystem::path& path);

}  // namespace fraudstack::stacking

#endif  // FRAUDSTACK_STACKING_STACKING_H_
