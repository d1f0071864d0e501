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

#include "fraudstack/explain/model_agnostic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"
#include "fraudstack/metrics/metrics.h"

namespace fraudstack::explain {
namespace {

constexpr double kRidge = 1e-6;

std::vector<std::string> default_names(std::vector<std::string> names, std::size_t d) {
  if (names.empty()) {
    for (std::size_t f = 0; f < d; ++f) names.push_back(fmt::format("f{}", f));
  }
  if (names.size() != d) {
    throw Error(fmt::format("{} feature names for {} columns", names.size(), d));
  }
  return names;
}

std::vector<double> checked_predict(const PredictFn& predict, const Matrix& x) {
  auto out = predict(x);
  if (out.size() != x.rows()) {
    throw Error(fmt::format("prediction function returned {} values for {} rows", out.size(),
                            x.rows()));
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

LimeSamples lime_samples(const PredictFn& predict, std::span<const double> x,
                         const Matrix& train, const LimeOptions& options) {
  const std::size_t d = x.size();
  if (train.cols() != d) {
    throw Error(fmt::format("training matrix has {} columns, instance has {}", train.cols(), d));
  }
  if (train.rows() == 0) throw Error("LIME needs training rows to sample from");
  if (options.n_samples < static_cast<int>(d) + 2) {
    throw Error(fmt::format("LIME needs at least {} samples for {} features, got {}", d + 2, d,
                            options.n_samples));
  }
  const auto n = static_cast<std::size_t>(options.n_samples);

  std::vector<double> mean(d, 0.0), scale(d, 1.0);
  for (std::size_t f = 0; f < d; ++f) {
    double sum = 0.0;
    for (std::size_t r = 0; r < train.rows(); ++r) sum += train(r, f);
    mean[f] = sum / static_cast<double>(train.rows());
    double ss = 0.0;
    for (std::size_t r = 0; r < train.rows(); ++r) ss += (train(r, f) - mean[f]) * (train(r, f) - mean[f]);
    const double sd = std::sqrt(ss / static_cast<double>(train.rows()));
    if (sd > 0.0) scale[f] = sd;
  }

  LimeSamples out;
  out.kernel_width =
      options.kernel_width > 0.0 ? options.kernel_width : 0.75 * std::sqrt(static_cast<double>(d));
  out.samples = Matrix(n, d);
  Rng rng(options.seed);
  for (std::size_t s = 0; s < n; ++s) {
    auto row = out.samples.row(s);
    std::copy(x.begin(), x.end(), row.begin());
    if (s == 0) continue;
    for (std::size_t f = 0; f < d; ++f) {
      if (rng.uniform() < 0.5) row[f] = train(rng.below(train.rows()), f);
    }
  }
  out.standardized = Matrix(n, d);
  out.weights.resize(n);
  const double sigma2 = out.kernel_width * out.kernel_width;
  for (std::size_t s = 0; s < n; ++s) {
    double dist2 = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
      const double z = (out.samples(s, f) - mean[f]) / scale[f];
      out.standardized(s, f) = z;
      const double dz = (out.samples(s, f) - x[f]) / scale[f];
      dist2 += dz * dz;
    }
    out.weights[s] = std::exp(-dist2 / sigma2);
  }
  out.targets = checked_predict(predict, out.samples);
  return out;
}

LimeExplanation lime_fit(const LimeSamples& samples) {
  const std::size_t n = samples.samples.rows();
  const std::size_t d = samples.samples.cols();
  // Samples identical to the instance carry no slope information.
  double perturbed_weight = 0.0;
  for (std::size_t s = 1; s < n; ++s) {
    const auto row = samples.samples.row(s);
    const auto x = samples.samples.row(0);
    if (!std::equal(row.begin(), row.end(), x.begin())) perturbed_weight += samples.weights[s];
  }
  if (!(perturbed_weight > 1e-10)) {
    throw Error(fmt::format(
        "LIME kernel width {} leaves no weight on the perturbed samples; use a larger width",
        samples.kernel_width));
  }

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d + 1),
                                                 static_cast<Eigen::Index>(d + 1));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d + 1));
  Eigen::VectorXd a(static_cast<Eigen::Index>(d + 1));
  for (std::size_t s = 0; s < n; ++s) {
    a(0) = 1.0;
    for (std::size_t f = 0; f < d; ++f) a(static_cast<Eigen::Index>(f + 1)) = samples.standardized(s, f);
    normal.noalias() += samples.weights[s] * a * a.transpose();
    rhs.noalias() += samples.weights[s] * samples.targets[s] * a;
  }
  for (std::size_t f = 1; f <= d; ++f) {
    normal(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f)) += kRidge;
  }
  const Eigen::VectorXd beta = normal.ldlt().solve(rhs);

  LimeExplanation out;
  out.intercept = beta(0);
  out.weights.resize(d);
  for (std::size_t f = 0; f < d; ++f) out.weights[f] = beta(static_cast<Eigen::Index>(f + 1));
  out.predicted_proba = samples.targets[0];
  out.kernel_width = samples.kernel_width;

  double w_sum = 0.0, wt_sum = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    w_sum += samples.weights[s];
    wt_sum += samples.weights[s] * samples.targets[s];
  }
  const double target_mean = wt_sum / w_sum;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double fit = out.intercept;
    for (std::size_t f = 0; f < d; ++f) fit += out.weights[f] * samples.standardized(s, f);
    ss_res += samples.weights[s] * (samples.targets[s] - fit) * (samples.targets[s] - fit);
    ss_tot += samples.weights[s] * (samples.targets[s] - target_mean) *
              (samples.targets[s] - target_mean);
  }
  if (ss_tot > 0.0) {
    out.local_r2 = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  } else {
    out.local_r2 = 1.0;
  }
  return out;
}

LimeExplanation lime_explain(const PredictFn& predict, std::span<const double> x,
                             const Matrix& train, const LimeOptions& options,
                             std::vector<std::string> feature_names) {
  auto names = default_names(std::move(feature_names), x.size());
  LimeExplanation out = lime_fit(lime_samples(predict, x, train, options));
  out.feature_names = std::move(names);
  return out;
}

std::vector<double> quantile_grid(std::vector<double> values, int n_grid) {
  if (values.empty()) throw Error("cannot build a grid from no values");
  if (n_grid < 2) throw Error(fmt::format("n_grid must be >= 2, got {}", n_grid));
  std::sort(values.begin(), values.end());
  const double last = static_cast<double>(values.size() - 1);
  std::vector<double> grid;
  for (int i = 0; i < n_grid; ++i) {
    const double pos = last * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double q = frac > 0.0 ? values[lo] + frac * (values[hi] - values[lo]) : values[lo];
    if (grid.empty() || q > grid.back()) grid.push_back(q);
  }
  return grid;
}

PdpCurve pdp(const PredictFn& predict, const Matrix& x, std::size_t feature, int n_grid,
             std::string name) {
  if (feature >= x.cols()) {
    throw Error(fmt::format("feature index {} out of range for {} columns", feature, x.cols()));
  }
  PdpCurve curve;
  curve.feature = feature;
  curve.name = name.empty() ? fmt::format("f{}", feature) : std::move(name);
  curve.grid = quantile_grid(x.column(feature), n_grid);
  Matrix work = x;
  for (double g : curve.grid) {
    for (std::size_t r = 0; r < work.rows(); ++r) work(r, feature) = g;
    const auto proba = checked_predict(predict, work);
    double sum = 0.0;
    for (double p : proba) sum += p;
    curve.mean_prediction.push_back(sum / static_cast<double>(proba.size()));
  }
  return curve;
}

std::string_view to_string(PfiMetric metric) { return metric == PfiMetric::kAuc ? "auc" : "f1"; }

PfiMetric pfi_metric_from_string(std::string_view text) {
  if (text == "auc") return PfiMetric::kAuc;
  if (text == "f1") return PfiMetric::kF1;
  throw Error(fmt::format("unknown importance metric '{}', expected auc or f1", text));
}

std::vector<PfiEntry> PfiResult::ranked() const {
  std::vector<PfiEntry> out = features;
  std::stable_sort(out.begin(), out.end(), [](const PfiEntry& a, const PfiEntry& b) {
    return a.mean_drop > b.mean_drop;
  });
  return out;
}

PfiResult permutation_importance(const PredictFn& predict, const Matrix& x,
                                 std::span<const int> y, const PfiOptions& options,
                                 std::vector<std::string> feature_names) {
  if (x.rows() != y.size()) {
    throw Error(fmt::format("{} rows but {} labels", x.rows(), y.size()));
  }
  if (x.rows() < 2) throw Error("permutation importance needs at least 2 rows");
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw Error("permutation importance metric is undefined for a single class");
  }
  if (options.n_repeats < 1) {
    throw Error(fmt::format("n_repeats must be >= 1, got {}", options.n_repeats));
  }
  auto names = default_names(std::move(feature_names), x.cols());
  auto score = [&](const Matrix& m) {
    const auto proba = checked_predict(predict, m);
    return options.metric == PfiMetric::kAuc ? metrics::auc_rank(y, proba)
                                             : metrics::f1_at(y, proba, options.threshold);
  };

  PfiResult result;
  result.baseline = score(x);
  Matrix work = x;
  const auto repeats = static_cast<std::size_t>(options.n_repeats);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    const auto original = x.column(f);
    PfiEntry entry;
    entry.feature = f;
    entry.name = names[f];
    for (std::size_t r = 0; r < repeats; ++r) {
      auto shuffled = original;
      Rng rng = Rng::derive(options.seed, f * repeats + r);
      rng.shuffle(shuffled);
      work.set_column(f, shuffled);
      entry.drops.push_back(result.baseline - score(work));
    }
    work.set_column(f, original);
    const double mean =
        std::accumulate(entry.drops.begin(), entry.drops.end(), 0.0) / static_cast<double>(repeats);
    double ss = 0.0;
    for (double v : entry.drops) ss += (v - mean) * (v - mean);
    entry.mean_drop = mean;
    entry.std = repeats > 1 ? std::sqrt(ss / static_cast<double>(repeats - 1)) : 0.0;
    result.features.push_back(std::move(entry));
  }
  return result;
}

void write_lime_json(const LimeExplanation& explanation, const std::filesystem::path& path) {
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t f = 0; f < explanation.weights.size(); ++f) {
    weights.push_back({{"feature", explanation.feature_names.at(f)},
                       {"weight", explanation.weights[f]}});
  }
  const nlohmann::json doc = {{"predicted_proba", explanation.predicted_proba},
                              {"intercept", explanation.intercept},
                              {"local_r2", explanation.local_r2},
                              {"kernel_width", explanation.kernel_width},
                              {"weights", std::move(weights)}};
  auto out = open_output(path);
  out << doc.dump(1) << '\n';
}

void write_pdp_csv(const PdpCurve& curve, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "grid_value,mean_proba\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << fmt::format("{},{}\n", curve.grid[i], curve.mean_prediction[i]);
  }
}

void write_pfi_csv(const PfiResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "feature,mean_drop,std\n";
  for (const auto& e : result.ranked()) out << fmt::format("{},{},{}\n", e.name, e.mean_drop, e.std);
}

}  // namespace fraudstack::explain
