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

#ifndef FRAUDSTACK_CLI_COMMANDS_H_
#define FRAUDSTACK_CLI_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraudstack/cli/run_config.h"
#include "fraudstack/common/error.h"
#include "fraudstack/common/matrix.h"
#include "fraudstack/data/preprocess.h"
#include "fraudstack/data/table.h"
#include "fraudstack/explain/shap.h"
#include "fraudstack/gbdt/model.h"

namespace fraudstack::cli {

// An error tagged with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs fn, rethrowing any failure as a StageError for `stage`.
template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

struct PreparedData {
  data::Table train;
  data::Table test;
  data::EncodingMap encoding;
  bool identity_joined = false;
  // SMOTE already applied to the whole dataset before the split.
  bool smote_applied = false;
};

// load -> join -> drop key -> impute -> encode -> (SMOTE) -> split.
PreparedData prepare_data(const RunConfig& config);

// Writes prepared/{train.fstable, test.fstable, encoding.json, manifest.json}.
void cmd_prepare(const RunConfig& config);

Dataset load_prepared(const std::filesystem::path& path);

struct Selection {
  gbdt::GbdtModel selector;
  std::vector<explain::FeatureImportance> ranking;
  std::vector<std::string> features;
};

// Trains the selector on `train` and keeps the top select_k features by mean
// |SHAP| over a seeded sample of shap_rows rows of `shap_source`.
Selection select_features(const Dataset& train, const Dataset& shap_source,
                          const RunConfig& config);

// Rows [0, n) sampled without replacement and sorted; all rows when n >= size.
std::vector<std::size_t> sample_rows(std::size_t size, std::size_t n, std::uint64_t seed);

// Fills in per-model seeds derived from the run seed.
RunConfig seeded(RunConfig config);

// Writes model.json, metrics.json, selection/, baselines/ and, when tuning
// is enabled, tune/.
void cmd_train(RunConfig config);

// Writes tune/trials.csv and tune/best_params.cfg for config.tune_target.
void cmd_tune(RunConfig config);

// Writes test/{metrics.json, roc.csv, pr.csv, confusion.csv}.
void cmd_evaluate(const RunConfig& config);

struct ExplainRequest {
  std::string method;  // shap, lime, pdp or pfi
  std::optional<std::size_t> row;
  std::optional<std::string> feature;
  bool summary = false;
  // GBDT explained by shap: base1, base2, base3, meta or selector.
  std::string model = "base1";
  std::string metric = "auc";
  // Prepared container to explain; defaults to the prepared test split.
  std::optional<std::filesystem::path> data;
};

void cmd_explain(const RunConfig& config, const ExplainRequest& request);

void cmd_synth_data(const RunConfig& config, std::size_t rows, double positive_rate);

// Writes report/comparison.csv with test metrics of the stack, each base
// model and the two baselines.
void cmd_report(const RunConfig& config);

}  // namespace fraudstack::cli

#endif  // FRAUDSTACK_CLI_COMMANDS_H_
