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

#ifndef FRAUDSTACK_GBDT_CONFIG_H_
#define FRAUDSTACK_GBDT_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace fraudstack::gbdt {

// How a tree is expanded:
//   kDepthWise  fills every level down to max_depth (XGBoost style).
//   kLeafWise   repeatedly splits the leaf with the highest gain until
//               max_leaves is reached (LightGBM style).
//   kSymmetric  uses one (feature, threshold) per level for every node of
//               that level, giving oblivious trees (CatBoost style).
enum class Growth { kDepthWise, kLeafWise, kSymmetric };

std::string_view to_string(Growth growth);
Growth growth_from_string(std::string_view text);

struct GbdtConfig {
  int n_estimators = 300;
  int max_depth = 6;
  double learning_rate = 0.1;
  double subsample = 0.8;
  double colsample_bytree = 0.8;
  double scale_pos_weight = 1.0;
  Growth growth = Growth::kDepthWise;
  int max_leaves = 31;
  double lambda = 1.0;
  double gamma = 0.0;
  int n_bins = 256;
  // Minimum hessian sum in each child of a split.
  double min_child_weight = 1e-3;
  std::uint64_t seed = 0;
  // Worker threads for histogram construction; results do not depend on it.
  int jobs = 1;

  void validate() const;

  // Sets one field from its text form; `name` is the field name above.
  void set(std::string_view name, std::string_view value);

  nlohmann::json to_json() const;
  static GbdtConfig from_json(const nlohmann::json& doc);
};

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_CONFIG_H_
