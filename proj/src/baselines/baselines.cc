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

#include "fraudstack/baselines/baselines.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/gbdt/loss.h"
#include "fraudstack/gbdt/trainer.h"

namespace fraudstack::baselines {
namespace {

constexpr int kFormatVersion = 1;

double margin_of(std::span<const double> z_row, std::span<const double> theta) {
  double m = theta[0];
  for (std::size_t f = 0; f < z_row.size(); ++f) m += theta[f + 1] * z_row[f];
  return m;
}

void check_problem(const Matrix& z, std::span<const int> y, std::span<const double> theta) {
  if (z.rows() != y.size()) throw Error(fmt::format("{} rows but {} labels", z.rows(), y.size()));
  if (theta.size() != z.cols() + 1) {
    throw Error(fmt::format("expected {} parameters, got {}", z.cols() + 1, theta.size()));
  }
}

}  // namespace

double LinearModel::predict_margin(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw Error(fmt::format("row has {} values, model expects {}", x.size(), weights.size()));
  }
  double m = bias;
  for (std::size_t f = 0; f < x.size(); ++f) m += weights[f] * (x[f] - mean[f]) / scale[f];
  return m;
}

double LinearModel::predict_proba(std::span<const double> x) const {
  return gbdt::sigmoid(predict_margin(x));
}

std::vector<double> LinearModel::predict_proba(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_proba(x.row(r));
  return out;
}

double logreg_objective(const Matrix& z, std::span<const int> y, double l2,
                        std::span<const double> theta) {
  check_problem(z, y, theta);
  double loss = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) loss += gbdt::logloss(y[r], margin_of(z.row(r), theta), 1.0);
  loss /= static_cast<double>(std::max<std::size_t>(z.rows(), 1));
  double penalty = 0.0;
  for (std::size_t f = 1; f < theta.size(); ++f) penalty += theta[f] * theta[f];
  return loss + 0.5 * l2 * penalty;
}

std::vector<double> logreg_gradient(const Matrix& z, std::span<const int> y, double l2,
                                    std::span<const double> theta) {
  check_problem(z, y, theta);
  std::vector<double> grad(theta.size(), 0.0);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const auto row = z.row(r);
    const double residual = gbdt::sigmoid(margin_of(row, theta)) - y[r];
    grad[0] += residual;
    for (std::size_t f = 0; f < row.size(); ++f) grad[f + 1] += residual * row[f];
  }
  const double n = static_cast<double>(std::max<std::size_t>(z.rows(), 1));
  for (double& g : grad) g /= n;
  for (std::size_t f = 1; f < theta.size(); ++f) grad[f] += l2 * theta[f];
  return grad;
}

LinearModel train_logreg(const Matrix& x, std::span<const int> y, const LogregOptions& options,
                         std::vector<std::string> feature_names) {
  if (x.rows() != y.size()) throw Error(fmt::format("{} rows but {} labels", x.rows(), y.size()));
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives + std::count(y.begin(), y.end(), 0) != static_cast<std::ptrdiff_t>(y.size())) {
    throw Error("labels must be 0 or 1");
  }
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw Error("logistic regression needs both classes");
  }
  if (!(options.l2 >= 0.0)) throw Error("l2 must be >= 0");
  if (options.max_iters < 0) throw Error("max_iters must be >= 0");
  const std::size_t d = x.cols();
  if (feature_names.empty()) {
    for (std::size_t f = 0; f < d; ++f) feature_names.push_back(fmt::format("f{}", f));
  }
  if (feature_names.size() != d) {
    throw Error(fmt::format("{} feature names for {} columns", feature_names.size(), d));
  }

  LinearModel model;
  model.feature_names = std::move(feature_names);
  model.l2 = options.l2;
  model.mean.assign(d, 0.0);
  model.scale.assign(d, 1.0);
  const double n = static_cast<double>(x.rows());
  for (std::size_t f = 0; f < d; ++f) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, f);
    model.mean[f] = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, f) - model.mean[f]) * (x(r, f) - model.mean[f]);
    const double sd = std::sqrt(ss / n);
    if (sd > 0.0) model.scale[f] = sd;
  }
  Matrix z(x.rows(), d);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t f = 0; f < d; ++f) z(r, f) = (x(r, f) - model.mean[f]) / model.scale[f];
  }

  std::vector<double> theta(d + 1, 0.0);
  double objective = logreg_objective(z, y, options.l2, theta);
  double step = 1.0;
  int it = 0;
  for (; it < options.max_iters; ++it) {
    const auto grad = logreg_gradient(z, y, options.l2, theta);
    double grad_inf = 0.0, grad_sq = 0.0;
    for (double g : grad) {
      grad_inf = std::max(grad_inf, std::abs(g));
      grad_sq += g * g;
    }
    if (grad_inf < options.tol) {
      model.converged = true;
      break;
    }
    std::vector<double> candidate(theta.size());
    double next = objective;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < theta.size(); ++i) candidate[i] = theta[i] - step * grad[i];
      next = logreg_objective(z, y, options.l2, candidate);
      if (next <= objective - 0.5 * step * grad_sq) break;
      step *= 0.5;
    }
    if (!(next < objective)) break;
    theta = candidate;
    objective = next;
    step *= 2.0;
  }
  if (!model.converged && it < options.max_iters) {
    // Line search stalled; report convergence only when the gradient is small.
    const auto grad = logreg_gradient(z, y, options.l2, theta);
    double grad_inf = 0.0;
    for (double g : grad) grad_inf = std::max(grad_inf, std::abs(g));
    model.converged = grad_inf < options.tol;
  }
  model.iterations = it;
  model.bias = theta[0];
  model.weights.assign(theta.begin() + 1, theta.end());
  return model;
}

gbdt::GbdtModel train_decision_tree(const Matrix& x, std::span<const int> y, int max_depth,
                                    std::vector<std::string> feature_names, std::uint64_t seed) {
  gbdt::GbdtConfig config;
  config.n_estimators = 1;
  config.max_depth = max_depth;
  config.learning_rate = 1.0;
  config.subsample = 1.0;
  config.colsample_bytree = 1.0;
  config.growth = gbdt::Growth::kDepthWise;
  config.seed = seed;
  return gbdt::train(x, y, config, std::move(feature_names));
}

nlohmann::json to_json(const LinearModel& model) {
  return {{"format_version", kFormatVersion},
          {"kind", "linear"},
          {"feature_names", model.feature_names},
          {"weights", model.weights},
          {"bias", model.bias},
          {"mean", model.mean},
          {"scale", model.scale},
          {"l2", model.l2},
          {"iterations", model.iterations},
          {"converged", model.converged}};
}

LinearModel linear_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("kind").get<std::string>() != "linear") throw Error("document is not a linear model");
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw Error(fmt::format("unsupported linear model format version {}", version));
    }
    LinearModel model;
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.mean = doc.at("mean").get<std::vector<double>>();
    model.scale = doc.at("scale").get<std::vector<double>>();
    model.l2 = doc.at("l2").get<double>();
    model.iterations = doc.at("iterations").get<int>();
    model.converged = doc.at("converged").get<bool>();
    const std::size_t d = model.feature_names.size();
    if (model.weights.size() != d || model.mean.size() != d || model.scale.size() != d) {
      throw Error("linear model arrays disagree with the feature count");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("malformed linear model document: {}", e.what()));
  }
}

void save_linear(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << to_json(model).dump(1) << '\n';
}

LinearModel load_linear(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  try {
    return linear_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("cannot parse '{}': {}", path.string(), e.what()));
  }
}

}  // namespace fraudstack::baselines
