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

#ifndef FRAUDSTACK_TUNE_TUNE_H_
#define FRAUDSTACK_TUNE_TUNE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fraudstack/common/matrix.h"
#include "fraudstack/common/random.h"
#include "fraudstack/gbdt/config.h"
#include "fraudstack/resample/smote.h"

namespace fraudstack::tune {

using ParamValue = std::variant<std::int64_t, double, std::string>;
using Params = std::map<std::string, ParamValue, std::less<>>;

std::string format_value(const ParamValue& value);

struct Parameter {
  enum class Kind { kInt, kFloat, kLogFloat, kChoice };

  std::string name;
  Kind kind = Kind::kFloat;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::string> choices;

  static Parameter int_range(std::string name, std::int64_t lo, std::int64_t hi);
  static Parameter float_range(std::string name, double lo, double hi);
  static Parameter log_float_range(std::string name, double lo, double hi);
  static Parameter choice(std::string name, std::vector<std::string> options);

  // Ranges are inclusive; floats are drawn from [lo, hi).
  bool contains(const ParamValue& value) const;
  ParamValue sample(Rng& rng) const;
};

class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<Parameter> parameters);

  void add(Parameter parameter);
  const std::vector<Parameter>& parameters() const { return parameters_; }
  Params sample(Rng& rng) const;
  bool contains(const Params& params) const;

 private:
  std::vector<Parameter> parameters_;
};

// n_estimators, max_depth, learning_rate (log scale), subsample,
// colsample_bytree and scale_pos_weight.
SearchSpace default_space();

struct Trial {
  int index = 0;
  Params params;
  // -infinity when the objective threw.
  double score = 0.0;
  bool failed = false;
  std::string error;
};

struct TuneResult {
  Params best_params;
  double best_score = 0.0;
  int best_index = 0;
  std::vector<Trial> trials;
};

enum class Strategy { kRandom, kAdaptive };
std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view text);

using Objective = std::function<double(const Params&)>;

// Maximizes `objective`. Trials run one after another in index order; the
// best trial is the highest score, ties kept by the lowest index. Throws when
// every trial failed.
//
// kAdaptive: the first max(5, n_trials / 4) trials are random. Afterwards the
// completed trials are split into the top 25% ("good") and the rest, a Parzen
// density is built per parameter for each group, 24 candidates are drawn from
// the good densities and the one with the highest good/bad density ratio runs.
TuneResult tune(const Objective& objective, const SearchSpace& space, int n_trials,
                Strategy strategy, std::uint64_t seed);

// Sets each named field of `config` from `params`.
void apply_params(const Params& params, gbdt::GbdtConfig& config);

// trial,score,<parameter columns in space order>
void write_trials_csv(const TuneResult& result, const SearchSpace& space,
                      const std::filesystem::path& path);

struct CvObjectiveOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  // Oversamples each training fold when set.
  std::optional<resample::SmoteConfig> smote;
};

// Mean validation AUC over stratified folds of a model built from `base`
// with the trial parameters applied. Keeps a reference to `data`.
Objective cv_auc_objective(const Dataset& data, gbdt::GbdtConfig base,
                           CvObjectiveOptions options);

}  // namespace fraudstack::tune

#endif  // FRAUDSTACK_TUNE_TUNE_H_
