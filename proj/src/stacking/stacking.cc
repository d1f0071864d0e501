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

#include "fraudstack/stacking/stacking.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/parallel.h"
#include "fraudstack/common/random.h"
#include "fraudstack/gbdt/serialize.h"
#include "fraudstack/gbdt/trainer.h"
#include "fraudstack/metrics/metrics.h"
#include "fraudstack/resample/kfold.h"

namespace fraudstack::stacking {
namespace {

constexpr int kFormatVersion = 1;

Dataset oversample(const Dataset& data, const StackingConfig& config, std::uint64_t stream) {
  if (!config.smote) return data;
  resample::SmoteConfig smote = *config.smote;
  smote.seed = Rng::derive(smote.seed, stream).next();
  smote.jobs = 1;
  return resample::smote(data, smote);
}

gbdt::GbdtModel fit_base(const Dataset& data, const StackingConfig& config, std::size_t slot) {
  gbdt::GbdtConfig cfg = config.base[slot];
  cfg.jobs = 1;
  return gbdt::train(data, cfg);
}

double clamp_threshold(double t) {
  return std::clamp(t, 1e-6, 1.0 - 1e-6);
}

}  // namespace

const std::array<std::string, kNumBases>& meta_feature_names() {
  static const std::array<std::string, kNumBases> names = {
      "base_depth_wise", "base_leaf_wise", "base_symmetric"};
  return names;
}

gbdt::Growth base_growth(std::size_t slot) {
  static constexpr std::array<gbdt::Growth, kNumBases> growth = {
      gbdt::Growth::kDepthWise, gbdt::Growth::kLeafWise, gbdt::Growth::kSymmetric};
  return growth.at(slot);
}

StackingConfig StackingConfig::defaults() {
  StackingConfig config;
  for (std::size_t i = 0; i < kNumBases; ++i) config.base[i].growth = base_growth(i);
  config.meta.max_depth = 2;
  config.meta.n_estimators = 50;
  config.meta.subsample = 1.0;
  config.meta.colsample_bytree = 1.0;
  return config;
}

void StackingConfig::validate() const {
  for (std::size_t i = 0; i < kNumBases; ++i) {
    base[i].validate();
    if (base[i].growth != base_growth(i)) {
      throw Error(fmt::format("base model {} must use {} growth, got {}", i + 1,
                              gbdt::to_string(base_growth(i)), gbdt::to_string(base[i].growth)));
    }
  }
  meta.validate();
  if (!naive && folds < 2) throw Error(fmt::format("folds must be >= 2, got {}", folds));
  if (smote) smote->validate();
  if (fixed_threshold && !(*fixed_threshold > 0.0 && *fixed_threshold < 1.0)) {
    throw Error(fmt::format("threshold must be in (0, 1), got {}", *fixed_threshold));
  }
}

Matrix StackingModel::meta_features(const Matrix& x) const {
  if (x.cols() != selected_features.size()) {
    throw Error(fmt::format("expected {} feature columns, got {}", selected_features.size(),
                            x.cols()));
  }
  Matrix out(x.rows(), kNumBases);
  for (std::size_t b = 0; b < kNumBases; ++b) {
    const auto proba = base[b].predict_proba(x);
    out.set_column(b, proba);
  }
  return out;
}

std::vector<double> StackingModel::predict_proba(const Matrix& x) const {
  return meta.predict_proba(meta_features(x));
}

std::vector<double> StackingModel::predict_proba(const Matrix& x,
                                                 std::span<const std::string> names) const {
  if (names.size() != x.cols()) {
    throw Error(fmt::format("{} column names for {} columns", names.size(), x.cols()));
  }
  const auto columns = resolve_columns(names, selected_features);
  return predict_proba(x.select_columns(columns));
}

std::vector<int> StackingModel::classify(const Matrix& x) const {
  return apply_threshold(predict_proba(x), threshold);
}

std::vector<int> StackingModel::classify(const Matrix& x,
                                         std::span<const std::string> names) const {
  return apply_threshold(predict_proba(x, names), threshold);
}

std::vector<int> apply_threshold(std::span<const double> proba, double threshold) {
  std::vector<int> labels(proba.size());
  for (std::size_t i = 0; i < proba.size(); ++i) labels[i] = proba[i] >= threshold ? 1 : 0;
  return labels;
}

StackingModel train_stacking(const Dataset& data, const StackingConfig& config,
                             StackingTrace* trace) {
  config.validate();
  if (data.size() == 0) throw Error("cannot train a stack on an empty dataset");
  const std::size_t n = data.size();

  StackingModel model;
  model.selected_features = data.feature_names;

  Matrix meta_x(n, kNumBases);
  std::vector<int> row_fold(n, 0);
  std::vector<std::vector<std::size_t>> fold_train_rows;

  if (config.naive) {
    const Dataset balanced = oversample(data, config, 0);
    parallel_for(kNumBases, config.jobs,
                 [&](std::size_t b) { model.base[b] = fit_base(balanced, config, b); });
    meta_x = model.meta_features(data.x);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    fold_train_rows.push_back(std::move(all));
  } else {
    const auto folds = resample::stratified_kfold(data.y, config.folds, config.seed);
    const auto k = static_cast<std::size_t>(config.folds);
    std::vector<Dataset> train_sets(k);
    fold_train_rows.resize(k);
    parallel_for(k, config.jobs, [&](std::size_t f) {
      fold_train_rows[f] = folds.train_rows(static_cast<int>(f));
      train_sets[f] = oversample(data.subset(fold_train_rows[f]), config, f + 1);
    });
    std::vector<gbdt::GbdtModel> fold_models(k * kNumBases);
    parallel_for(k * kNumBases, config.jobs, [&](std::size_t task) {
      fold_models[task] = fit_base(train_sets[task / kNumBases], config, task % kNumBases);
    });
    train_sets.clear();
    for (std::size_t f = 0; f < k; ++f) {
      const auto test_rows = folds.test_rows(static_cast<int>(f));
      const Matrix test_x = data.x.select_rows(test_rows);
      for (std::size_t b = 0; b < kNumBases; ++b) {
        const auto proba = fold_models[f * kNumBases + b].predict_proba(test_x);
        for (std::size_t j = 0; j < test_rows.size(); ++j) meta_x(test_rows[j], b) = proba[j];
      }
      for (std::size_t row : test_rows) row_fold[row] = static_cast<int>(f);
    }
    const Dataset balanced = oversample(data, config, 0);
    parallel_for(kNumBases, config.jobs,
                 [&](std::size_t b) { model.base[b] = fit_base(balanced, config, b); });
  }

  const auto& names = meta_feature_names();
  model.meta = gbdt::train(meta_x, data.y, config.meta,
                           std::vector<std::string>(names.begin(), names.end()));
  if (config.fixed_threshold) {
    model.threshold = *config.fixed_threshold;
  } else {
    const auto proba = model.meta.predict_proba(meta_x);
    model.threshold = clamp_threshold(metrics::best_f1_threshold(data.y, proba).threshold);
  }

  if (trace != nullptr) {
    trace->row_fold = std::move(row_fold);
    trace->fold_train_rows = std::move(fold_train_rows);
    trace->meta_features = std::move(meta_x);
  }
  return model;
}

nlohmann::json to_json(const StackingModel& model) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : model.base) bases.push_back(gbdt::to_json(b));
  return {{"format_version", kFormatVersion},
          {"kind", "stacking"},
          {"selected_features", model.selected_features},
          {"threshold", model.threshold},
          {"base_models", std::move(bases)},
          {"meta_model", gbdt::to_json(model.meta)}};
}

StackingModel from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("kind").get<std::string>() != "stacking") {
      throw Error("document is not a stacking model");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw Error(fmt::format("unsupported stacking format version {}", version));
    }
    StackingModel model;
    model.selected_features = doc.at("selected_features").get<std::vector<std::string>>();
    model.threshold = doc.at("threshold").get<double>();
    const auto& bases = doc.at("base_models");
    if (!bases.is_array() || bases.size() != kNumBases) {
      throw Error("stacking document must hold exactly 3 base models");
    }
    for (std::size_t b = 0; b < kNumBases; ++b) {
      model.base[b] = gbdt::from_json(bases[b]);
      if (model.base[b].feature_names != model.selected_features) {
        throw Error(fmt::format("base model {} features differ from selected_features", b + 1));
      }
    }
    model.meta = gbdt::from_json(doc.at("meta_model"));
    if (model.meta.n_features() != kNumBases) {
      throw Error("meta model must have 3 input features");
    }
    if (!(model.threshold > 0.0 && model.threshold < 1.0)) {
      throw Error(fmt::format("threshold {} outside (0, 1)", model.threshold));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("malformed stacking document: {}", e.what()));
  }
}

void save_stacking(const StackingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << to_json(model).dump(1) << '\n';
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

StackingModel load_stacking(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("cannot parse '{}': {}", path.string(), e.what()));
  }
}

}  // namespace fraudstack::stacking
