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

#include "fraudstack/cli/commands.h"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fraudstack/baselines/baselines.h"
#include "fraudstack/common/random.h"
#include "fraudstack/data/container.h"
#include "fraudstack/data/csv.h"
#include "fraudstack/data/synthetic.h"
#include "fraudstack/explain/model_agnostic.h"
#include "fraudstack/gbdt/serialize.h"
#include "fraudstack/gbdt/trainer.h"
#include "fraudstack/metrics/metrics.h"
#include "fraudstack/resample/kfold.h"
#include "fraudstack/resample/smote.h"
#include "fraudstack/stacking/stacking.h"
#include "fraudstack/tune/tune.h"

namespace fraudstack::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Streams for seeds derived from the run seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kSmoteStream = 2;
constexpr std::uint64_t kSampleStream = 3;
constexpr std::uint64_t kTuneStream = 4;
constexpr std::uint64_t kExplainStream = 5;
constexpr std::uint64_t kModelStream = 16;

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng::derive(seed, stream).next();
}

void write_json(const fs::path& path, const json& doc) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << doc.dump(1) << '\n';
  if (!out) throw Error(fmt::format("write failed for {}", path.string()));
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void require_file(const fs::path& path, std::string_view produced_by) {
  if (!fs::exists(path)) {
    throw Error(fmt::format("{} not found; run '{}' first", path.string(), produced_by));
  }
}

class Timer {
 public:
  explicit Timer(std::string label)
      : label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    spdlog::info("{} took {:.2f}s", label_, d.count());
  }

 private:
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

json manifest(const RunConfig& config) {
  const fs::path path = config.prepared_dir() / "manifest.json";
  require_file(path, "prepare");
  return read_json(path);
}

resample::SmoteConfig smote_config(const RunConfig& config) {
  resample::SmoteConfig s = config.smote;
  s.seed = sub_seed(config.require_seed(), kSmoteStream);
  s.jobs = config.jobs;
  return s;
}

// SMOTE is applied to the training data unless prepare already did it.
bool smote_in_training(const RunConfig& config) {
  return config.smote_enabled && !manifest(config).value("smote_applied", false);
}

Dataset select_features_of(const Dataset& data, std::span<const std::string> features) {
  const auto idx = resolve_columns(data.feature_names, features);
  Dataset out;
  out.x = data.x.select_columns(idx);
  out.y = data.y;
  out.feature_names.assign(features.begin(), features.end());
  return out;
}

std::vector<std::string> read_selected(const RunConfig& config) {
  const fs::path path = config.out / "selection" / "selector.json";
  require_file(path, "train");
  return read_json(path).at("selected_features").get<std::vector<std::string>>();
}

std::vector<std::string> slot_names() { return {"base1", "base2", "base3"}; }

tune::TuneResult run_tuning(RunConfig& config, const Dataset& train, bool use_smote) {
  Timer timer("tuning");
  const std::uint64_t seed = config.require_seed();
  const std::string target = config.tune_target;
  gbdt::GbdtConfig& cfg = config.target_config(target);

  tune::CvObjectiveOptions options;
  options.folds = config.tune_folds;
  options.seed = sub_seed(seed, kTuneStream);
  Dataset objective_data;
  if (target == "meta") {
    // The meta-learner is tuned on out-of-fold meta-features.
    stacking::StackingTrace trace;
    stacking::train_stacking(train, config.stacking_config(use_smote), &trace);
    objective_data.x = trace.meta_features;
    objective_data.y = train.y;
    const auto& names = stacking::meta_feature_names();
    objective_data.feature_names.assign(names.begin(), names.end());
  } else {
    objective_data = train;
    if (use_smote) options.smote = smote_config(config);
  }
  const auto objective = tune::cv_auc_objective(objective_data, cfg, options);
  const auto result = tune::tune(objective, tune::default_space(), config.tune_trials,
                                 config.tune_strategy, sub_seed(seed, kTuneStream + 1));
  tune::apply_params(result.best_params, cfg);

  const fs::path dir = config.out / "tune";
  fs::create_directories(dir);
  tune::write_trials_csv(result, tune::default_space(), dir / "trials.csv");
  std::ofstream best(dir / "best_params.cfg");
  best << "# target " << target << ", trial " << result.best_index << ", cv auc "
       << fmt::format("{}", result.best_score) << '\n';
  for (const auto& [name, value] : result.best_params) {
    best << target << '.' << name << " = " << tune::format_value(value) << '\n';
  }
  if (!best) throw Error("cannot write best_params.cfg");
  spdlog::info("tuning {}: best cv auc {:.4f} at trial {}", target, result.best_score,
               result.best_index);
  return result;
}

}  // namespace

RunConfig seeded(RunConfig config) {
  const std::uint64_t seed = config.require_seed();
  for (std::size_t i = 0; i < config.base.size(); ++i) {
    config.base[i].seed = sub_seed(seed, kModelStream + i);
  }
  config.meta.seed = sub_seed(seed, kModelStream + 3);
  config.selector.seed = sub_seed(seed, kModelStream + 4);
  config.smote.seed = sub_seed(seed, kSmoteStream);
  config.smote.jobs = config.jobs;
  for (auto& b : config.base) b.jobs = config.jobs;
  config.meta.jobs = config.jobs;
  config.selector.jobs = config.jobs;
  return config;
}

std::vector<std::size_t> sample_rows(std::size_t size, std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> rows;
  if (n >= size) {
    rows.resize(size);
    for (std::size_t i = 0; i < size; ++i) rows[i] = i;
    return rows;
  }
  Rng rng(seed);
  rows = rng.sample_without_replacement(size, n);
  std::sort(rows.begin(), rows.end());
  return rows;
}

PreparedData prepare_data(const RunConfig& config) {
  const std::uint64_t seed = config.require_seed();
  const fs::path schema_path = config.resolve_input(config.schema_file);
  require_file(schema_path, "synth-data");
  const auto schema_cfg = data::SchemaConfig::from_kv(KvConfig::load(schema_path));

  const fs::path tx_path = config.resolve_input(config.transaction_file);
  require_file(tx_path, "synth-data");
  data::Table table =
      data::load_csv(tx_path, schema_cfg.resolve(data::read_csv_header(tx_path)),
                     schema_cfg.na_tokens);
  spdlog::info("loaded {} transactions with {} columns", table.n_rows(), table.n_columns());

  PreparedData out;
  const fs::path id_path = config.resolve_input(config.identity_file);
  if (fs::exists(id_path)) {
    const data::Table identity =
        data::load_csv(id_path, schema_cfg.resolve(data::read_csv_header(id_path)),
                       schema_cfg.na_tokens);
    table = data::left_join(table, identity, schema_cfg.key_column);
    out.identity_joined = true;
  } else {
    spdlog::warn("identity table {} not found, continuing without it", id_path.string());
  }

  if (!schema_cfg.key_column.empty() && table.schema().find(schema_cfg.key_column)) {
    const std::vector<std::string> key{schema_cfg.key_column};
    table = data::drop_columns(table, key);
  }
  table = data::impute(table);
  auto [encoded, encoding] = data::label_encode(table);
  out.encoding = std::move(encoding);

  if (config.smote_before_split && config.smote_enabled) {
    spdlog::warn("SMOTE runs before the split, so synthetic rows "
                 "reach the test set");
    const Dataset balanced = resample::smote(encoded.to_dataset(), smote_config(config));
    encoded = data::table_from_dataset(balanced, schema_cfg.target_column);
    out.smote_applied = true;
  }
  auto [train, test] =
      data::stratified_split(encoded, config.test_fraction, sub_seed(seed, kSplitStream));
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

void cmd_prepare(const RunConfig& config) {
  const PreparedData prepared = run_stage("prepare", [&] { return prepare_data(config); });
  run_stage("prepare", [&] {
    const fs::path dir = config.prepared_dir();
    fs::create_directories(dir);
    data::write_container(dir / "train.fstable", prepared.train);
    data::write_container(dir / "test.fstable", prepared.test);
    write_json(dir / "encoding.json", prepared.encoding.to_json());

    const auto train_y = prepared.train.labels();
    const auto test_y = prepared.test.labels();
    json doc;
    doc["seed"] = config.require_seed();
    doc["smote_applied"] = prepared.smote_applied;
    doc["identity_joined"] = prepared.identity_joined;
    doc["test_fraction"] = config.test_fraction;
    doc["n_train"] = prepared.train.n_rows();
    doc["n_test"] = prepared.test.n_rows();
    doc["train_positives"] = std::count(train_y.begin(), train_y.end(), 1);
    doc["test_positives"] = std::count(test_y.begin(), test_y.end(), 1);
    doc["features"] = prepared.train.to_dataset().feature_names;
    write_json(dir / "manifest.json", doc);
    spdlog::info("prepared {} train and {} test rows in {}", prepared.train.n_rows(),
                 prepared.test.n_rows(), dir.string());
  });
}

Dataset load_prepared(const fs::path& path) {
  require_file(path, "prepare");
  return data::read_container(path).to_dataset();
}

Selection select_features(const Dataset& train, const Dataset& shap_source,
                          const RunConfig& config) {
  Selection out;
  out.selector = gbdt::train(train, config.selector);
  const auto rows = sample_rows(shap_source.size(), config.shap_rows,
                                sub_seed(config.require_seed(), kSampleStream));
  out.ranking = explain::shap_summary(out.selector, shap_source.x.select_rows(rows), config.jobs);
  std::size_t k = config.select_k;
  if (k > out.ranking.size()) {
    spdlog::warn("select_k {} exceeds the {} available features, keeping all", k,
                 out.ranking.size());
    k = out.ranking.size();
  }
  out.features = explain::select_top_k(out.ranking, k);
  return out;
}

void cmd_train(RunConfig config) {
  Timer timer("train");
  config = seeded(std::move(config));
  const fs::path out = config.out;
  const Dataset full = run_stage("train", [&] {
    return load_prepared(config.prepared_dir() / "train.fstable");
  });
  const bool use_smote = run_stage("train", [&] { return smote_in_training(config); });

  // Selection sees the same (balanced) data the base models train on; the
  // SHAP summary is taken over real rows only.
  const Selection selection = run_stage("select", [&] {
    Timer t("feature selection");
    const Dataset balanced = use_smote ? resample::smote(full, smote_config(config)) : full;
    Selection s = select_features(balanced, full, config);
    const fs::path dir = out / "selection";
    fs::create_directories(dir);
    explain::write_shap_summary_csv(s.ranking, dir / "shap_summary.csv");
    json doc;
    doc["select_k"] = s.features.size();
    doc["shap_rows"] = std::min(config.shap_rows, full.size());
    doc["selected_features"] = s.features;
    doc["selector_model"] = gbdt::to_json(s.selector);
    write_json(dir / "selector.json", doc);
    spdlog::info("selected {} of {} features", s.features.size(), full.feature_names.size());
    return s;
  });
  const Dataset train = select_features_of(full, selection.features);

  if (config.tune_enabled) {
    run_stage("tune", [&] { run_tuning(config, train, use_smote); });
  }

  stacking::StackingTrace trace;
  const stacking::StackingModel model = run_stage("stack", [&] {
    Timer t("stacking");
    return stacking::train_stacking(train, config.stacking_config(use_smote), &trace);
  });

  run_stage("train", [&] {
    stacking::save_stacking(model, out / "model.json");

    // Training report on the data the models were fit to.
    const Dataset fit_data = use_smote ? resample::smote(train, smote_config(config)) : train;
    const auto proba = model.predict_proba(fit_data.x);
    json doc = metrics::to_json(metrics::evaluate(proba, fit_data.y, model.threshold));
    doc["split"] = use_smote ? "train_balanced" : "train";
    doc["smote_in_training"] = use_smote;
    doc["naive_stacking"] = config.naive_stacking;
    if (!config.naive_stacking) {
      // Per-fold AUC of the meta-learner on out-of-fold meta-features.
      std::vector<double> fold_auc;
      const auto meta_proba = model.meta.predict_proba(trace.meta_features);
      for (int f = 0; f < config.folds; ++f) {
        std::vector<int> y;
        std::vector<double> s;
        for (std::size_t i = 0; i < train.size(); ++i) {
          if (trace.row_fold[i] != f) continue;
          y.push_back(train.y[i]);
          s.push_back(meta_proba[i]);
        }
        fold_auc.push_back(metrics::auc_rank(y, s));
      }
      doc["cv_fold_auc"] = fold_auc;
      doc["cv_auc_spread"] = *std::max_element(fold_auc.begin(), fold_auc.end()) -
                             *std::min_element(fold_auc.begin(), fold_auc.end());
    }
    write_json(out / "metrics.json", doc);
  });

  run_stage("baselines", [&] {
    Timer t("baselines");
    const Dataset fit_data = use_smote ? resample::smote(train, smote_config(config)) : train;
    fs::create_directories(out / "baselines");
    baselines::LogregOptions lopt;
    lopt.l2 = config.baseline_l2;
    lopt.max_iters = config.baseline_max_iters;
    const auto logreg = baselines::train_logreg(fit_data.x, fit_data.y, lopt, train.feature_names);
    if (!logreg.converged) {
      spdlog::warn("logistic regression stopped after {} iterations without converging",
                   logreg.iterations);
    }
    baselines::save_linear(logreg, out / "baselines" / "logreg.json");
    const auto tree = baselines::train_decision_tree(fit_data.x, fit_data.y,
                                                     config.baseline_tree_depth,
                                                     train.feature_names, config.base[0].seed);
    gbdt::save_model(tree, out / "baselines" / "decision_tree.json");
  });
  spdlog::info("model written to {}", (out / "model.json").string());
}

void cmd_tune(RunConfig config) {
  config = seeded(std::move(config));
  const Dataset full = run_stage("tune", [&] {
    return load_prepared(config.prepared_dir() / "train.fstable");
  });
  run_stage("tune", [&] {
    const bool use_smote = smote_in_training(config);
    const fs::path sel = config.out / "selection" / "selector.json";
    const Dataset train =
        fs::exists(sel) ? select_features_of(full, read_selected(config)) : full;
    if (!fs::exists(sel)) spdlog::warn("no feature selection found, tuning on all features");
    run_tuning(config, train, use_smote);
  });
}

void cmd_evaluate(const RunConfig& config) {
  run_stage("evaluate", [&] {
    require_file(config.out / "model.json", "train");
    const auto model = stacking::load_stacking(config.out / "model.json");
    const Dataset test = load_prepared(config.prepared_dir() / "test.fstable");
    const auto proba = model.predict_proba(test.x, test.feature_names);
    const auto report = metrics::evaluate(proba, test.y, model.threshold);
    metrics::write_report(report, config.out / "test");
    spdlog::info("test auc {:.4f}, f1(1) {:.4f} at threshold {:.4f}", report.roc.auc,
                 report.scores.positive.f1, report.threshold);
  });
}

namespace {

struct ExplainTarget {
  gbdt::GbdtModel model;
  // Maps prepared feature columns to the model's input columns.
  std::function<Matrix(const Matrix&, std::span<const std::string>)> inputs;
};

ExplainTarget explain_target(const RunConfig& config, const stacking::StackingModel& stack,
                             const std::string& name) {
  const auto select = [&stack](const Matrix& x, std::span<const std::string> names) {
    return x.select_columns(resolve_columns(names, stack.selected_features));
  };
  if (name == "meta") {
    return {stack.meta, [&stack, select](const Matrix& x, std::span<const std::string> names) {
              return stack.meta_features(select(x, names));
            }};
  }
  if (name == "selector") {
    const fs::path path = config.out / "selection" / "selector.json";
    require_file(path, "train");
    auto selector = gbdt::from_json(read_json(path).at("selector_model"));
    auto names_of = selector.feature_names;
    return {std::move(selector),
            [names_of](const Matrix& x, std::span<const std::string> names) {
              return x.select_columns(resolve_columns(names, names_of));
            }};
  }
  const auto slots = slot_names();
  const auto it = std::find(slots.begin(), slots.end(), name);
  if (it == slots.end()) {
    throw Error(fmt::format("unknown model '{}', expected base1, base2, base3, meta or selector",
                            name));
  }
  return {stack.base[static_cast<std::size_t>(it - slots.begin())], select};
}

}  // namespace

void cmd_explain(const RunConfig& config, const ExplainRequest& request) {
  run_stage("explain", [&] {
    const std::uint64_t seed = config.require_seed();
    require_file(config.out / "model.json", "train");
    const auto stack = stacking::load_stacking(config.out / "model.json");
    const fs::path data_path = request.data.value_or(config.prepared_dir() / "test.fstable");
    const Dataset data = load_prepared(data_path);
    const Dataset selected = select_features_of(data, stack.selected_features);
    const fs::path dir = config.out / "explain";
    fs::create_directories(dir);
    const explain::PredictFn predict = [&stack](const Matrix& x) {
      return stack.predict_proba(x);
    };

    const auto check_row = [&](std::size_t row) {
      if (row >= data.size()) {
        throw Error(fmt::format("row {} out of range, {} has {} rows", row, data_path.string(),
                                data.size()));
      }
    };

    if (request.method == "shap") {
      const ExplainTarget target = explain_target(config, stack, request.model);
      const Matrix x = target.inputs(data.x, data.feature_names);
      if (request.row && !request.summary) {
        check_row(*request.row);
        const auto row = x.row(*request.row);
        const auto values = explain::tree_shap(target.model, row);
        explain::write_shap_values_json(
            values, target.model.predict_margin(x.select_rows(std::vector{*request.row}))[0],
            dir / (request.model == "base1"
                       ? fmt::format("shap_{}.json", *request.row)
                       : fmt::format("shap_{}_{}.json", request.model, *request.row)));
      } else {
        const auto rows = sample_rows(x.rows(), config.shap_rows, sub_seed(seed, kExplainStream));
        const auto ranking = explain::shap_summary(target.model, x.select_rows(rows), config.jobs);
        explain::write_shap_summary_csv(
            ranking, dir / (request.model == "base1"
                                ? std::string("shap_summary.csv")
                                : fmt::format("shap_summary_{}.csv", request.model)));
      }
    } else if (request.method == "lime") {
      if (!request.row) throw Error("lime needs --row");
      check_row(*request.row);
      const Dataset train = load_prepared(config.prepared_dir() / "train.fstable");
      const Matrix train_x = select_features_of(train, stack.selected_features).x;
      const auto rows = sample_rows(train_x.rows(), config.lime_train_rows,
                                    sub_seed(seed, kExplainStream));
      explain::LimeOptions options;
      options.n_samples = static_cast<int>(config.lime_samples);
      options.seed = sub_seed(seed, kExplainStream + 1);
      const auto explanation =
          explain::lime_explain(predict, selected.x.row(*request.row), train_x.select_rows(rows),
                                options, stack.selected_features);
      explain::write_lime_json(explanation, dir / fmt::format("lime_{}.json", *request.row));
    } else if (request.method == "pdp") {
      if (!request.feature) throw Error("pdp needs --feature");
      const auto& names = stack.selected_features;
      const auto it = std::find(names.begin(), names.end(), *request.feature);
      if (it == names.end()) {
        throw Error(fmt::format("feature '{}' is not one of the {} model features",
                                *request.feature, names.size()));
      }
      const auto rows = sample_rows(selected.size(), config.pdp_rows,
                                    sub_seed(seed, kExplainStream + 2));
      const auto curve = explain::pdp(predict, selected.x.select_rows(rows),
                                      static_cast<std::size_t>(it - names.begin()),
                                      config.pdp_grid, *request.feature);
      explain::write_pdp_csv(curve, dir / fmt::format("pdp_{}.csv", *request.feature));
    } else if (request.method == "pfi") {
      const auto rows = sample_rows(selected.size(), config.pfi_rows,
                                    sub_seed(seed, kExplainStream + 3));
      const Dataset sample = selected.subset(rows);
      explain::PfiOptions options;
      options.metric = explain::pfi_metric_from_string(request.metric);
      options.n_repeats = config.pfi_repeats;
      options.seed = sub_seed(seed, kExplainStream + 4);
      options.threshold = stack.threshold;
      const auto result = explain::permutation_importance(predict, sample.x, sample.y, options,
                                                          stack.selected_features);
      explain::write_pfi_csv(result, dir / fmt::format("pfi_{}.csv", request.metric));
    } else {
      throw Error(fmt::format("unknown method '{}', expected shap, lime, pdp or pfi",
                              request.method));
    }
    spdlog::info("{} explanation written to {}", request.method, dir.string());
  });
}

void cmd_synth_data(const RunConfig& config, std::size_t rows, double positive_rate) {
  run_stage("synth-data", [&] {
    data::SyntheticOptions options;
    options.n_rows = rows;
    options.positive_rate = positive_rate;
    options.seed = config.require_seed();
    data::write_synthetic(data::generate_synthetic(options), config.data_dir);
    spdlog::info("wrote {} synthetic transactions to {}", rows, config.data_dir.string());
  });
}

void cmd_report(const RunConfig& config) {
  run_stage("report", [&] {
    require_file(config.out / "model.json", "train");
    const auto stack = stacking::load_stacking(config.out / "model.json");
    const Dataset test = load_prepared(config.prepared_dir() / "test.fstable");
    const Dataset selected = select_features_of(test, stack.selected_features);

    struct Row {
      std::string name;
      std::vector<double> proba;
      double threshold;
    };
    std::vector<Row> rows;
    rows.push_back({"stacking", stack.predict_proba(selected.x), stack.threshold});
    const auto slots = slot_names();
    for (std::size_t s = 0; s < slots.size(); ++s) {
      rows.push_back({slots[s], stack.base[s].predict_proba(selected.x), 0.5});
    }
    const fs::path logreg_path = config.out / "baselines" / "logreg.json";
    const fs::path tree_path = config.out / "baselines" / "decision_tree.json";
    require_file(logreg_path, "train");
    require_file(tree_path, "train");
    rows.push_back({"logreg", baselines::load_linear(logreg_path).predict_proba(selected.x), 0.5});
    rows.push_back(
        {"decision_tree", gbdt::load_model(tree_path).predict_proba(selected.x), 0.5});

    const fs::path dir = config.out / "report";
    fs::create_directories(dir);
    std::ofstream out(dir / "comparison.csv");
    out << "model,auc_roc,auc_pr,accuracy,precision_1,recall_1,f1_1,f1_macro,threshold\n";
    for (const Row& r : rows) {
      const auto e = metrics::evaluate(r.proba, selected.y, r.threshold);
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.name, e.roc.auc, e.pr.auc,
                         e.scores.accuracy, e.scores.positive.precision,
                         e.scores.positive.recall, e.scores.positive.f1, e.scores.macro.f1,
                         r.threshold);
      spdlog::info("{:>14}  auc {:.4f}  f1(1) {:.4f}", r.name, e.roc.auc, e.scores.positive.f1);
    }
    if (!out) throw Error("cannot write comparison.csv");
  });
}

}  // namespace fraudstack::cli
