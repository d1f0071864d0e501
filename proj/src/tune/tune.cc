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

#include "fraudstack/tune/tune.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fraudstack/common/error.h"
#include "fraudstack/gbdt/trainer.h"
#include "fraudstack/metrics/metrics.h"
#include "fraudstack/resample/kfold.h"

namespace fraudstack::tune {
namespace {

constexpr double kGamma = 0.25;
constexpr int kCandidates = 24;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_numeric(Parameter::Kind kind) { return kind != Parameter::Kind::kChoice; }

// Numeric parameters live on an internal axis: the value itself, or its log.
double encode(const Parameter& p, const ParamValue& v) {
  switch (p.kind) {
    case Parameter::Kind::kInt:
      return static_cast<double>(std::get<std::int64_t>(v));
    case Parameter::Kind::kFloat:
      return std::get<double>(v);
    case Parameter::Kind::kLogFloat:
      return std::log(std::get<double>(v));
    case Parameter::Kind::kChoice:
      break;
  }
  throw Error("encode called on a choice parameter");
}

std::pair<double, double> axis(const Parameter& p) {
  if (p.kind == Parameter::Kind::kLogFloat) return {std::log(p.lo), std::log(p.hi)};
  return {p.lo, p.hi};
}

ParamValue decode(const Parameter& p, double x) {
  switch (p.kind) {
    case Parameter::Kind::kInt:
      return static_cast<std::int64_t>(std::clamp(std::round(x), p.lo, p.hi));
    case Parameter::Kind::kFloat:
      return std::clamp(x, p.lo, p.hi);
    case Parameter::Kind::kLogFloat:
      return std::clamp(std::exp(x), p.lo, p.hi);
    case Parameter::Kind::kChoice:
      break;
  }
  throw Error("decode called on a choice parameter");
}

std::size_t choice_index(const Parameter& p, const ParamValue& v) {
  const auto& s = std::get<std::string>(v);
  const auto it = std::find(p.choices.begin(), p.choices.end(), s);
  return static_cast<std::size_t>(it - p.choices.begin());
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Mixture of range-truncated Gaussians around the observations plus one
// uniform component over the whole range.
class NumericParzen {
 public:
  NumericParzen(std::vector<double> centers, double lo, double hi)
      : centers_(std::move(centers)), lo_(lo), hi_(hi) {
    const double n = static_cast<double>(centers_.size());
    sigma_ = std::max((hi - lo) * 0.3 * std::pow(n + 1.0, -0.2), (hi - lo) * 1e-3);
  }

  double density(double x) const {
    double total = 1.0 / (hi_ - lo_);
    for (double mu : centers_) {
      const double mass = normal_cdf((hi_ - mu) / sigma_) - normal_cdf((lo_ - mu) / sigma_);
      const double z = (x - mu) / sigma_;
      total += std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * std::numbers::pi) * mass);
    }
    return total / static_cast<double>(centers_.size() + 1);
  }

  double sample(Rng& rng) const {
    const auto component = rng.below(centers_.size() + 1);
    if (component == centers_.size()) return rng.uniform(lo_, hi_);
    const double mu = centers_[component];
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double x = mu + sigma_ * rng.normal();
      if (x >= lo_ && x <= hi_) return x;
    }
    return std::clamp(mu, lo_, hi_);
  }

 private:
  std::vector<double> centers_;
  double lo_;
  double hi_;
  double sigma_ = 1.0;
};

class ChoiceParzen {
 public:
  ChoiceParzen(const std::vector<std::size_t>& observed, std::size_t n_choices)
      : weights_(n_choices, 1.0) {
    for (std::size_t c : observed) weights_[c] += 1.0;
    total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  double density(std::size_t c) const { return weights_[c] / total_; }

  std::size_t sample(Rng& rng) const {
    double u = rng.uniform() * total_;
    for (std::size_t c = 0; c < weights_.size(); ++c) {
      if (u < weights_[c]) return c;
      u -= weights_[c];
    }
    return weights_.size() - 1;
  }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

Params propose_adaptive(const SearchSpace& space, const std::vector<Trial>& trials, Rng& rng) {
  std::vector<std::size_t> order(trials.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trials[a].score > trials[b].score;
  });
  const auto n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(kGamma * static_cast<double>(trials.size()))));

  struct Model {
    std::optional<NumericParzen> good_num, bad_num;
    std::optional<ChoiceParzen> good_cat, bad_cat;
  };
  std::vector<Model> models;
  for (const auto& p : space.parameters()) {
    Model m;
    if (is_numeric(p.kind)) {
      std::vector<double> good, bad;
      for (std::size_t r = 0; r < order.size(); ++r) {
        const double x = encode(p, trials[order[r]].params.at(p.name));
        (r < n_good ? good : bad).push_back(x);
      }
      const auto [lo, hi] = axis(p);
      m.good_num.emplace(std::move(good), lo, hi);
      m.bad_num.emplace(std::move(bad), lo, hi);
    } else {
      std::vector<std::size_t> good, bad;
      for (std::size_t r = 0; r < order.size(); ++r) {
        const auto c = choice_index(p, trials[order[r]].params.at(p.name));
        (r < n_good ? good : bad).push_back(c);
      }
      m.good_cat.emplace(good, p.choices.size());
      m.bad_cat.emplace(bad, p.choices.size());
    }
    models.push_back(std::move(m));
  }

  Params best;
  double best_ratio = -kInf;
  for (int c = 0; c < kCandidates; ++c) {
    Params candidate;
    double log_ratio = 0.0;
    for (std::size_t i = 0; i < space.parameters().size(); ++i) {
      const auto& p = space.parameters()[i];
      const auto& m = models[i];
      if (is_numeric(p.kind)) {
        const ParamValue v = decode(p, m.good_num->sample(rng));
        const double x = encode(p, v);
        log_ratio += std::log(m.good_num->density(x)) - std::log(m.bad_num->density(x));
        candidate.emplace(p.name, v);
      } else {
        const auto k = m.good_cat->sample(rng);
        log_ratio += std::log(m.good_cat->density(k)) - std::log(m.bad_cat->density(k));
        candidate.emplace(p.name, p.choices[k]);
      }
    }
    if (log_ratio > best_ratio) {
      best_ratio = log_ratio;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace

std::string format_value(const ParamValue& value) {
  return std::visit([](const auto& v) { return fmt::format("{}", v); }, value);
}

Parameter Parameter::int_range(std::string name, std::int64_t lo, std::int64_t hi) {
  if (lo >= hi) throw Error(fmt::format("{}: empty range [{}, {}]", name, lo, hi));
  return {std::move(name), Kind::kInt, static_cast<double>(lo), static_cast<double>(hi), {}};
}

Parameter Parameter::float_range(std::string name, double lo, double hi) {
  if (!(lo < hi)) throw Error(fmt::format("{}: empty range [{}, {}]", name, lo, hi));
  return {std::move(name), Kind::kFloat, lo, hi, {}};
}

Parameter Parameter::log_float_range(std::string name, double lo, double hi) {
  if (!(lo < hi) || lo <= 0.0) {
    throw Error(fmt::format("{}: log range needs 0 < lo < hi, got [{}, {}]", name, lo, hi));
  }
  return {std::move(name), Kind::kLogFloat, lo, hi, {}};
}

Parameter Parameter::choice(std::string name, std::vector<std::string> options) {
  if (options.empty()) throw Error(fmt::format("{}: no choices", name));
  return {std::move(name), Kind::kChoice, 0.0, 0.0, std::move(options)};
}

bool Parameter::contains(const ParamValue& value) const {
  switch (kind) {
    case Kind::kInt: {
      const auto* v = std::get_if<std::int64_t>(&value);
      return v != nullptr && static_cast<double>(*v) >= lo && static_cast<double>(*v) <= hi;
    }
    case Kind::kFloat:
    case Kind::kLogFloat: {
      const auto* v = std::get_if<double>(&value);
      return v != nullptr && *v >= lo && *v <= hi;
    }
    case Kind::kChoice: {
      const auto* v = std::get_if<std::string>(&value);
      return v != nullptr && std::find(choices.begin(), choices.end(), *v) != choices.end();
    }
  }
  return false;
}

ParamValue Parameter::sample(Rng& rng) const {
  switch (kind) {
    case Kind::kInt: {
      const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
      return static_cast<std::int64_t>(lo) + static_cast<std::int64_t>(rng.below(span));
    }
    case Kind::kFloat:
      return rng.uniform(lo, hi);
    case Kind::kLogFloat:
      return std::exp(rng.uniform(std::log(lo), std::log(hi)));
    case Kind::kChoice:
      return choices[rng.below(choices.size())];
  }
  throw Error("unknown parameter kind");
}

SearchSpace::SearchSpace(std::vector<Parameter> parameters) {
  for (auto& p : parameters) add(std::move(p));
}

void SearchSpace::add(Parameter parameter) {
  for (const auto& p : parameters_) {
    if (p.name == parameter.name) throw Error(fmt::format("duplicate parameter '{}'", p.name));
  }
  parameters_.push_back(std::move(parameter));
}

Params SearchSpace::sample(Rng& rng) const {
  Params params;
  for (const auto& p : parameters_) params.emplace(p.name, p.sample(rng));
  return params;
}

bool SearchSpace::contains(const Params& params) const {
  if (params.size() != parameters_.size()) return false;
  for (const auto& p : parameters_) {
    const auto it = params.find(p.name);
    if (it == params.end() || !p.contains(it->second)) return false;
  }
  return true;
}

SearchSpace default_space() {
  return SearchSpace({
      Parameter::int_range("n_estimators", 100, 600),
      Parameter::int_range("max_depth", 3, 10),
      Parameter::log_float_range("learning_rate", 0.01, 0.3),
      Parameter::float_range("subsample", 0.5, 1.0),
      Parameter::float_range("colsample_bytree", 0.5, 1.0),
      Parameter::float_range("scale_pos_weight", 1.0, 30.0),
  });
}

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::kRandom ? "random" : "adaptive";
}

Strategy strategy_from_string(std::string_view text) {
  if (text == "random") return Strategy::kRandom;
  if (text == "adaptive") return Strategy::kAdaptive;
  throw Error(fmt::format("unknown strategy '{}', expected random or adaptive", text));
}

TuneResult tune(const Objective& objective, const SearchSpace& space, int n_trials,
                Strategy strategy, std::uint64_t seed) {
  if (n_trials < 1) throw Error(fmt::format("n_trials must be >= 1, got {}", n_trials));
  if (space.parameters().empty()) throw Error("search space is empty");
  Rng rng(seed);
  const int n_startup = std::max(5, n_trials / 4);
  TuneResult result;
  result.best_score = -kInf;
  result.best_index = -1;
  for (int t = 0; t < n_trials; ++t) {
    Trial trial;
    trial.index = t;
    trial.params = (strategy == Strategy::kRandom || t < n_startup)
                       ? space.sample(rng)
                       : propose_adaptive(space, result.trials, rng);
    try {
      trial.score = objective(trial.params);
      if (std::isnan(trial.score)) throw Error("objective returned NaN");
    } catch (const std::exception& e) {
      trial.failed = true;
      trial.error = e.what();
      trial.score = -kInf;
      spdlog::warn("trial {} failed: {}", t, e.what());
    }
    if (!trial.failed && (result.best_index < 0 || trial.score > result.best_score)) {
      result.best_score = trial.score;
      result.best_index = t;
      result.best_params = trial.params;
    }
    result.trials.push_back(std::move(trial));
  }
  if (result.best_index < 0) {
    throw Error(fmt::format("all {} trials failed; first error: {}", n_trials,
                            result.trials.front().error));
  }
  return result;
}

void apply_params(const Params& params, gbdt::GbdtConfig& config) {
  for (const auto& [name, value] : params) config.set(name, format_value(value));
  config.validate();
}

void write_trials_csv(const TuneResult& result, const SearchSpace& space,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << "trial,score";
  for (const auto& p : space.parameters()) out << ',' << p.name;
  out << '\n';
  for (const auto& trial : result.trials) {
    out << trial.index << ',' << fmt::format("{}", trial.score);
    for (const auto& p : space.parameters()) out << ',' << format_value(trial.params.at(p.name));
    out << '\n';
  }
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

Objective cv_auc_objective(const Dataset& data, gbdt::GbdtConfig base,
                           CvObjectiveOptions options) {
  const auto folds = resample::stratified_kfold(data.y, options.folds, options.seed);
  return [&data, base, options, folds](const Params& params) {
    gbdt::GbdtConfig config = base;
    apply_params(params, config);
    double total = 0.0;
    for (int f = 0; f < options.folds; ++f) {
      Dataset train = data.subset(folds.train_rows(f));
      if (options.smote) {
        resample::SmoteConfig smote = *options.smote;
        smote.seed = Rng::derive(smote.seed, static_cast<std::uint64_t>(f) + 1).next();
        train = resample::smote(train, smote);
      }
      const auto model = gbdt::train(train, config);
      const auto test_rows = folds.test_rows(f);
      const Dataset test = data.subset(test_rows);
      total += metrics::auc_rank(test.y, model.predict_proba(test.x));
    }
    return total / options.folds;
  };
}

}  // namespace fraudstack::tune
