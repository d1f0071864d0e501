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

#ifndef FRAUDSTACK_CLI_RUN_CONFIG_H_
#define FRAUDSTACK_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "fraudstack/common/kv_config.h"
#include "fraudstack/gbdt/config.h"
#include "fraudstack/resample/smote.h"
#include "fraudstack/stacking/stacking.h"
#include "fraudstack/tune/tune.h"

namespace fraudstack::cli {

struct ThresholdPolicy {
  // nullopt selects the F1-optimal cutoff.
  std::optional<double> fixed;

  // "f1" or "fixed:<value>".
  static ThresholdPolicy parse(std::string_view text);
  std::string to_string() const;
};

// Every setting of a pipeline run. Loaded from a key = value document; the
// keys are the field paths below (for example `smote.k`, `base2.max_leaves`).
struct RunConfig {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::filesystem::path out = "run";

  // Raw inputs. Relative paths are taken from `data_dir`.
  std::filesystem::path data_dir = "data";
  std::string transaction_file = "train_transaction.csv";
  std::string identity_file = "train_identity.csv";
  std::string schema_file = "schema.cfg";

  double test_fraction = 0.2;

  bool smote_enabled = true;
  resample::SmoteConfig smote;

  // Number of features kept by SHAP selection.
  std::size_t select_k = 30;
  // Rows of the training set used for the selection SHAP summary.
  std::size_t shap_rows = 1000;

  int folds = 5;
  bool naive_stacking = false;
  // SMOTE on the whole dataset before the train/test split.
  bool smote_before_split = false;

  bool tune_enabled = true;
  int tune_trials = 20;
  // Cross-validation folds inside each tuning trial.
  int tune_folds = 3;
  tune::Strategy tune_strategy = tune::Strategy::kAdaptive;
  std::string tune_target = "base1";

  ThresholdPolicy threshold;

  // Base slots base1/base2/base3, the meta-learner and the feature-selection
  // model (defaults to the base1 settings).
  std::array<gbdt::GbdtConfig, stacking::kNumBases> base;
  gbdt::GbdtConfig meta;
  gbdt::GbdtConfig selector;

  int baseline_tree_depth = 6;
  double baseline_l2 = 1e-3;
  int baseline_max_iters = 500;

  // Rows used by the model-agnostic explainers.
  std::size_t lime_samples = 2000;
  std::size_t lime_train_rows = 5000;
  std::size_t pdp_rows = 2000;
  int pdp_grid = 20;
  std::size_t pfi_rows = 5000;
  int pfi_repeats = 5;

  RunConfig();

  // Applies every key of `kv` on top of the defaults. Unknown keys are errors.
  static RunConfig from_kv(const KvConfig& kv);
  void set(const std::string& key, const std::string& value);

  std::uint64_t require_seed() const;
  std::filesystem::path resolve_input(const std::string& file) const;

  std::filesystem::path prepared_dir() const { return out / "prepared"; }

  stacking::StackingConfig stacking_config(bool use_smote) const;
  // The slot named base1, base2, base3 or meta.
  gbdt::GbdtConfig& target_config(const std::string& target);
};

}  // namespace fraudstack::cli

#endif  // FRAUDSTACK_CLI_RUN_CONFIG_H_
