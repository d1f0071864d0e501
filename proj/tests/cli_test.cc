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

#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fraudstack/cli/commands.h"
#include "fraudstack/cli/run_config.h"
#include "fraudstack/common/error.h"
#include "fraudstack/data/container.h"
#include "test_util.h"

namespace fraudstack::cli {
namespace {

namespace fs = std::filesystem;

TEST(RunConfig, ParsesKeysAndRejectsUnknown) {
  const auto config = RunConfig::from_kv(KvConfig::parse(
      "seed = 5\nfolds = 4\nbase1.max_depth = 4\nbase2.max_leaves = 12\nsmote.k = 3\n"
      "tune.strategy = random\nthreshold = fixed:0.4\nmeta.n_estimators = 30\n"));
  EXPECT_EQ(config.require_seed(), 5u);
  EXPECT_EQ(config.folds, 4);
  EXPECT_EQ(config.base[0].max_depth, 4);
  EXPECT_EQ(config.base[1].max_leaves, 12);
  EXPECT_EQ(config.smote.k_neighbors, 3);
  EXPECT_EQ(config.tune_strategy, tune::Strategy::kRandom);
  EXPECT_EQ(config.threshold.fixed, 0.4);
  EXPECT_EQ(config.meta.n_estimators, 30);
  // The selector inherits base1 settings unless given its own.
  EXPECT_EQ(config.selector.max_depth, 4);

  EXPECT_THROW(RunConfig::from_kv(KvConfig::parse("bogus = 1\n")), Error);
  EXPECT_THROW(RunConfig::from_kv(KvConfig::parse("base1.bogus = 1\n")), Error);
  EXPECT_THROW(RunConfig::from_kv(KvConfig::parse("base1.growth = leaf_wise\n")).stacking_config(false).validate(),
               Error);
  EXPECT_THROW(RunConfig{}.require_seed(), Error);
}

TEST(RunConfig, ThresholdPolicy) {
  EXPECT_FALSE(ThresholdPolicy::parse("f1").fixed);
  EXPECT_EQ(ThresholdPolicy::parse("fixed:0.5").fixed, 0.5);
  EXPECT_EQ(ThresholdPolicy::parse("fixed:0.25").to_string(), "fixed:0.25");
  EXPECT_THROW(ThresholdPolicy::parse("fixed:1.5"), Error);
  EXPECT_THROW(ThresholdPolicy::parse("youden"), Error);
}

TEST(RunConfig, StageErrorsNameTheStage) {
  try {
    run_stage("evaluate", [] { throw Error("boom"); });
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "evaluate");
    EXPECT_STREQ(e.what(), "evaluate: boom");
  }
}

// Small models so the whole pipeline runs in a few seconds.
RunConfig small_run(const fs::path& root) {
  RunConfig config;
  config.seed = 3;
  config.data_dir = root / "data";
  config.out = root / "run";
  for (const char* slot : {"base1", "base2", "base3", "selector"}) {
    config.set(std::string(slot) + ".n_estimators", "25");
    config.set(std::string(slot) + ".max_depth", "4");
  }
  config.select_k = 10;
  config.folds = 3;
  config.tune_trials = 3;
  config.tune_folds = 2;
  config.lime_samples = 300;
  config.pfi_rows = 300;
  config.pfi_repeats = 2;
  config.shap_rows = 200;
  return config;
}

void run_pipeline(const RunConfig& config) {
  cmd_synth_data(config, 2000, 0.05);
  cmd_prepare(config);
  cmd_train(config);
  cmd_evaluate(config);
  cmd_report(config);
  cmd_explain(config, {.method = "shap", .summary = true});
  cmd_explain(config, {.method = "shap", .row = 4});
  cmd_explain(config, {.method = "lime", .row = 17});
  cmd_explain(config, {.method = "pdp", .feature = "V12"});
  cmd_explain(config, {.method = "pfi"});
}

TEST(Pipeline, WritesEveryArtifactReproducibly) {
  testing::TempDir a, b;
  run_pipeline(small_run(a.path()));
  run_pipeline(small_run(b.path()));

  const std::vector<std::string> artifacts = {
      "prepared/train.fstable", "prepared/test.fstable",   "prepared/encoding.json",
      "prepared/manifest.json", "selection/selector.json", "selection/shap_summary.csv",
      "tune/trials.csv",        "tune/best_params.cfg",    "model.json",
      "metrics.json",           "baselines/logreg.json",   "baselines/decision_tree.json",
      "test/metrics.json",      "test/roc.csv",            "test/pr.csv",
      "test/confusion.csv",     "report/comparison.csv",   "explain/shap_summary.csv",
      "explain/shap_4.json",    "explain/lime_17.json",    "explain/pdp_V12.csv",
      "explain/pfi_auc.csv"};
  for (const auto& name : artifacts) {
    const fs::path pa = a / "run" / name;
    ASSERT_TRUE(fs::exists(pa)) << name;
    EXPECT_EQ(testing::read_file(pa), testing::read_file(b / "run" / name)) << name;
  }

  const auto model = nlohmann::json::parse(testing::read_file(a / "run" / "model.json"));
  EXPECT_EQ(model["selected_features"].size(), 10u);
  const auto summary = testing::read_file(a / "run" / "selection" / "shap_summary.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1 + 50);
  const auto manifest = nlohmann::json::parse(testing::read_file(a / "run/prepared/manifest.json"));
  EXPECT_EQ(manifest["n_train"], 1600);
  EXPECT_EQ(manifest["n_test"], 400);
  EXPECT_EQ(manifest["test_positives"], 20);
  EXPECT_TRUE(manifest["identity_joined"]);
}

TEST(Pipeline, MissingIdentityFallsBackToTransactions) {
  testing::TempDir dir;
  RunConfig config = small_run(dir.path());
  cmd_synth_data(config, 500, 0.1);
  fs::remove(dir / "data" / "train_identity.csv");
  cmd_prepare(config);
  const auto manifest =
      nlohmann::json::parse(testing::read_file(dir / "run/prepared/manifest.json"));
  EXPECT_FALSE(manifest["identity_joined"]);
  for (const auto& f : manifest["features"]) EXPECT_NE(f, "DeviceType");
}

TEST(Pipeline, SmoteBeforeSplitBalancesEverything) {
  testing::TempDir dir;
  RunConfig config = small_run(dir.path());
  config.smote_before_split = true;
  cmd_synth_data(config, 1000, 0.05);
  cmd_prepare(config);
  const auto manifest =
      nlohmann::json::parse(testing::read_file(dir / "run/prepared/manifest.json"));
  EXPECT_TRUE(manifest["smote_applied"]);
  // 950 negatives oversampled to 950 positives.
  EXPECT_EQ(manifest["n_train"].get<int>() + manifest["n_test"].get<int>(), 1900);
  EXPECT_EQ(manifest["train_positives"].get<int>() + manifest["test_positives"].get<int>(), 950);
}

TEST(Pipeline, ErrorsCarryTheStage) {
  testing::TempDir dir;
  const RunConfig config = small_run(dir.path());
  try {
    cmd_evaluate(config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "evaluate");
    EXPECT_NE(std::string(e.what()).find("train"), std::string::npos);
  }
  EXPECT_THROW(cmd_prepare(config), StageError);
  cmd_synth_data(config, 400, 0.1);
  cmd_prepare(config);
  cmd_train([&] {
    RunConfig c = config;
    c.tune_enabled = false;
    return c;
  }());
  EXPECT_THROW(cmd_explain(config, {.method = "pdp", .feature = "not_a_feature"}), StageError);
  EXPECT_THROW(cmd_explain(config, {.method = "lime", .row = 100000}), StageError);
  EXPECT_THROW(cmd_explain(config, {.method = "magic"}), StageError);
}

#ifdef FRAUDSTACK_CLI_PATH
int run(const std::string& args) {
  const std::string command = std::string(FRAUDSTACK_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodes) {
  testing::TempDir dir;
  const std::string base = "--data-dir " + (dir / "data").string() + " --out " +
                           (dir / "run").string();
  EXPECT_NE(run(base + " prepare"), 0);  // no seed
  EXPECT_EQ(run(base + " --seed 1 synth-data --rows 300"), 0);
  EXPECT_EQ(run(base + " --seed 1 prepare"), 0);
  EXPECT_NE(run(base + " --seed 1 evaluate"), 0);  // no model yet
  EXPECT_NE(run(base + " --seed 1 train --threshold bogus"), 0);
  EXPECT_NE(run(base + " --seed 1 frobnicate"), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "prepared" / "train.fstable"));
}
#endif

}  // namespace
}  // namespace fraudstack::cli
