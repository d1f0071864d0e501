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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fraudstack/cli/commands.h"
#include "fraudstack/cli/run_config.h"
#include "fraudstack/common/kv_config.h"

namespace {

using fraudstack::cli::RunConfig;

// Command-line values that override the config file, as config keys.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;

  template <typename T>
  void add(const std::string& key, const std::optional<T>& value) {
    if (value) values.emplace_back(key, fmt::format("{}", *value));
  }
  void flag(const std::string& key, bool set, const char* value) {
    if (set) values.emplace_back(key, value);
  }
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("fraudstack"));
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");

  CLI::App app{"Stacked gradient-boosting fraud detection with explanations"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> data_dir;
  bool verbose = false;
  app.add_option("--config", config_path, "key = value settings file");
  app.add_option("--seed", seed, "Seed for every random choice (required)");
  app.add_option("--jobs", jobs,
                 "Worker threads. Results are reproducible only with --jobs 1");
  app.add_option("--out", out, "Run directory for all artifacts");
  app.add_option("--data-dir", data_dir, "Directory holding the raw CSV files");
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  bool smote_first = false;
  std::optional<double> test_fraction;
  auto* prepare = app.add_subcommand("prepare", "Load, join, impute, encode and split");
  prepare->add_flag("--paper-faithful-order", smote_first,
                    "Oversample the whole dataset before the train/test split");
  prepare->add_option("--test-fraction", test_fraction, "Held-out fraction");
  std::optional<int> smote_k;
  std::optional<double> smote_ratio;
  bool no_smote = false;
  prepare->add_option("--smote-k", smote_k, "SMOTE neighbours");
  prepare->add_option("--smote-ratio", smote_ratio, "SMOTE minority/majority target ratio");

  bool naive = false;
  bool skip_tune = false;
  std::optional<std::string> threshold;
  std::optional<int> folds;
  std::optional<int> trials;
  std::optional<std::string> strategy;
  std::optional<std::string> target;
  std::optional<std::size_t> select_k;
  auto* train = app.add_subcommand("train", "Select features, tune, and fit the stack");
  train->add_flag("--naive-stacking", naive,
                  "Meta-features from in-sample base predictions");
  train->add_flag("--skip-tune", skip_tune, "Keep the configured hyperparameters");
  train->add_option("--threshold", threshold, "f1 or fixed:<value>");
  train->add_option("--folds", folds, "Stacking folds");
  train->add_option("--trials", trials, "Tuning trials");
  train->add_option("--strategy", strategy, "random or adaptive");
  train->add_option("--target", target, "Tuned slot: base1, base2, base3 or meta");
  train->add_option("--smote-k", smote_k, "SMOTE neighbours");
  train->add_option("--smote-ratio", smote_ratio, "SMOTE minority/majority target ratio");
  train->add_flag("--no-smote", no_smote, "Train on the imbalanced data");
  train->add_option("--select-k", select_k, "Features kept by SHAP selection");

  auto* tune = app.add_subcommand("tune", "Hyperparameter search for one model slot");
  tune->add_option("--trials", trials, "Number of trials");
  tune->add_option("--strategy", strategy, "random or adaptive");
  tune->add_option("--target", target, "base1, base2, base3 or meta");
  std::optional<int> tune_folds;
  tune->add_option("--folds", tune_folds, "Cross-validation folds per trial");

  auto* evaluate = app.add_subcommand("evaluate", "Score the held-out split");

  fraudstack::cli::ExplainRequest request;
  std::optional<std::size_t> row;
  std::optional<std::string> feature;
  std::optional<std::string> explain_data;
  auto* explain = app.add_subcommand("explain", "SHAP, LIME, PDP or PFI explanations");
  explain->add_option("--method", request.method, "shap, lime, pdp or pfi")->required();
  explain->add_option("--row", row, "Row of the explained data");
  explain->add_option("--feature", feature, "Feature for pdp");
  explain->add_flag("--summary", request.summary, "Global SHAP summary");
  explain->add_option("--model", request.model,
                      "Tree model for shap: base1, base2, base3, meta or selector");
  explain->add_option("--metric", request.metric, "PFI metric: auc or f1");
  explain->add_option("--data", explain_data, "Prepared container (default: test split)");

  std::size_t rows = 10000;
  double positive_rate = 0.035;
  auto* synth = app.add_subcommand("synth-data", "Write a synthetic fraud dataset");
  synth->add_option("--rows", rows, "Transactions");
  synth->add_option("--positive-rate", positive_rate, "Fraud rate");

  auto* report = app.add_subcommand("report", "Compare the stack with its bases and baselines");

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    RunConfig config = fraudstack::cli::run_stage("config", [&] {
      return config_path.empty() ? RunConfig{}
                                 : RunConfig::from_kv(fraudstack::KvConfig::load(config_path));
    });
    Overrides o;
    o.add("seed", seed);
    o.add("jobs", jobs);
    o.add("out", out);
    o.add("data_dir", data_dir);
    o.add("test_fraction", test_fraction);
    o.add("smote.k", smote_k);
    o.add("smote.ratio", smote_ratio);
    o.flag("smote.enabled", no_smote, "false");
    o.flag("smote_before_split", smote_first, "true");
    o.flag("naive_stacking", naive, "true");
    o.flag("tune.enabled", skip_tune, "false");
    o.add("threshold", threshold);
    o.add("folds", folds);
    o.add("tune.trials", trials);
    o.add("tune.strategy", strategy);
    o.add("tune.target", target);
    o.add("select_k", select_k);
    o.add("tune.folds", tune_folds);
    fraudstack::cli::run_stage("config", [&] {
      for (const auto& [key, value] : o.values) config.set(key, value);
      config.require_seed();
    });

    if (*prepare) {
      fraudstack::cli::cmd_prepare(config);
    } else if (*train) {
      fraudstack::cli::cmd_train(config);
    } else if (*tune) {
      fraudstack::cli::cmd_tune(config);
    } else if (*evaluate) {
      fraudstack::cli::cmd_evaluate(config);
    } else if (*explain) {
      request.row = row;
      request.feature = feature;
      if (explain_data) request.data = *explain_data;
      fraudstack::cli::cmd_explain(config, request);
    } else if (*synth) {
      fraudstack::cli::cmd_synth_data(config, rows, positive_rate);
    } else if (*report) {
      fraudstack::cli::cmd_report(config);
    }
  } catch (const fraudstack::cli::StageError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
