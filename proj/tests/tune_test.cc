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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"
#include "fraudstack/tune/tune.h"
#include "test_util.h"

namespace fraudstack::tune {
namespace {

double as_double(const ParamValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

SearchSpace mixed_space() {
  return SearchSpace({Parameter::float_range("x", 0, 10), Parameter::int_range("n", 2, 9),
                      Parameter::log_float_range("lr", 1e-3, 1.0),
                      Parameter::choice("kind", {"a", "b", "c"})});
}

TEST(SearchSpace, DefaultSpaceHasTheSixParameters) {
  const auto space = default_space();
  ASSERT_EQ(space.parameters().size(), 6u);
  struct Expected {
    const char* name;
    Parameter::Kind kind;
    double lo, hi;
  };
  const Expected expected[] = {
      {"n_estimators", Parameter::Kind::kInt, 100, 600},
      {"max_depth", Parameter::Kind::kInt, 3, 10},
      {"learning_rate", Parameter::Kind::kLogFloat, 0.01, 0.3},
      {"subsample", Parameter::Kind::kFloat, 0.5, 1.0},
      {"colsample_bytree", Parameter::Kind::kFloat, 0.5, 1.0},
      {"scale_pos_weight", Parameter::Kind::kFloat, 1, 30},
  };
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& p = space.parameters()[i];
    EXPECT_EQ(p.name, expected[i].name);
    EXPECT_EQ(p.kind, expected[i].kind);
    EXPECT_DOUBLE_EQ(p.lo, expected[i].lo);
    EXPECT_DOUBLE_EQ(p.hi, expected[i].hi);
  }
}

TEST(SearchSpace, SamplesStayInRangeAndMakeValidConfigs) {
  const auto space = default_space();
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Params p = space.sample(rng);
    ASSERT_TRUE(space.contains(p));
    for (const auto& param : space.parameters()) {
      const double v = as_double(p.at(param.name));
      ASSERT_GE(v, param.lo);
      ASSERT_LE(v, param.hi);
      if (param.kind == Parameter::Kind::kInt) {
        ASSERT_TRUE(std::holds_alternative<std::int64_t>(p.at(param.name)));
      }
    }
    gbdt::GbdtConfig cfg;
    ASSERT_NO_THROW(apply_params(p, cfg));
    EXPECT_EQ(cfg.n_estimators, std::get<std::int64_t>(p.at("n_estimators")));
    EXPECT_DOUBLE_EQ(cfg.subsample, std::get<double>(p.at("subsample")));
  }
}

TEST(SearchSpace, RejectsEmptyRanges) {
  EXPECT_THROW(Parameter::float_range("x", 1, 1), Error);
  EXPECT_THROW(Parameter::int_range("x", 5, 2), Error);
  EXPECT_THROW(Parameter::log_float_range("x", 0.0, 1.0), Error);
  EXPECT_THROW(Parameter::choice("x", {}), Error);
}

TEST(Tune, ConstantObjectiveKeepsFirstTrial) {
  for (auto strategy : {Strategy::kRandom, Strategy::kAdaptive}) {
    const auto result = tune([](const Params&) { return 0.5; }, mixed_space(), 12, strategy, 4);
    EXPECT_EQ(result.best_index, 0);
    EXPECT_EQ(result.best_params, result.trials[0].params);
  }
}

TEST(Tune, QuadraticOptimumFoundOverManySeeds) {
  const SearchSpace space({Parameter::float_range("x", 0, 10)});
  const Objective objective = [](const Params& p) {
    const double x = std::get<double>(p.at("x"));
    return -(x - 3) * (x - 3);
  };
  for (auto strategy : {Strategy::kRandom, Strategy::kAdaptive}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto result = tune(objective, space, 50, strategy, seed);
      EXPECT_LT(std::abs(std::get<double>(result.best_params.at("x")) - 3.0), 1.0)
          << to_string(strategy) << " seed " << seed;
    }
  }
}

TEST(Tune, BestScoreIsMaximumOfLog) {
  Rng noise(9);
  std::vector<double> values(30);
  for (double& v : values) v = noise.uniform();
  int call = 0;
  const auto result = tune([&](const Params&) { return values[call++]; }, mixed_space(), 30,
                           Strategy::kAdaptive, 2);
  ASSERT_EQ(result.trials.size(), 30u);
  double best = -1;
  int best_index = -1;
  for (const auto& t : result.trials) {
    if (t.score > best) {
      best = t.score;
      best_index = t.index;
    }
  }
  EXPECT_EQ(result.best_score, best);
  EXPECT_EQ(result.best_index, best_index);
  EXPECT_EQ(result.best_params, result.trials[static_cast<std::size_t>(best_index)].params);
}

TEST(Tune, SequencesAreReproducible) {
  const Objective objective = [](const Params& p) {
    return -std::abs(std::get<double>(p.at("x")) - 7.0) +
           (std::get<std::string>(p.at("kind")) == "b" ? 1.0 : 0.0);
  };
  for (auto strategy : {Strategy::kRandom, Strategy::kAdaptive}) {
    const auto a = tune(objective, mixed_space(), 25, strategy, 11);
    const auto b = tune(objective, mixed_space(), 25, strategy, 11);
    const auto c = tune(objective, mixed_space(), 25, strategy, 12);
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
      EXPECT_EQ(a.trials[i].params, b.trials[i].params);
      EXPECT_EQ(a.trials[i].score, b.trials[i].score);
    }
    EXPECT_NE(a.trials[0].params, c.trials[0].params);
  }
}

TEST(Tune, RandomStrategyDrawsFromTheSeededStream) {
  // The random strategy is the space sampler applied to a generator
  // derived from the seed, so two runs differing only in n_trials share a
  // prefix.
  const auto short_run = tune([](const Params&) { return 0.0; }, mixed_space(), 5,
                              Strategy::kRandom, 8);
  const auto long_run = tune([](const Params&) { return 0.0; }, mixed_space(), 15,
                             Strategy::kRandom, 8);
  for (std::size_t i = 0; i < short_run.trials.size(); ++i) {
    EXPECT_EQ(short_run.trials[i].params, long_run.trials[i].params);
  }
}

TEST(Tune, AdaptiveProposalsStayInRange) {
  const auto space = mixed_space();
  const Objective objective = [](const Params& p) {
    // Optimum pressed against the upper edges.
    return std::get<double>(p.at("x")) + static_cast<double>(std::get<std::int64_t>(p.at("n"))) +
           std::log(std::get<double>(p.at("lr")));
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto result = tune(objective, space, 60, Strategy::kAdaptive, seed);
    for (const auto& t : result.trials) ASSERT_TRUE(space.contains(t.params));
  }
  const auto default_result =
      tune([](const Params& p) { return -std::get<double>(p.at("learning_rate")); },
           default_space(), 40, Strategy::kAdaptive, 1);
  for (const auto& t : default_result.trials) ASSERT_TRUE(default_space().contains(t.params));
}

TEST(Tune, AdaptiveConcentratesNearTheOptimum) {
  const SearchSpace space({Parameter::float_range("x", 0, 10)});
  const Objective objective = [](const Params& p) {
    const double x = std::get<double>(p.at("x"));
    return -(x - 3) * (x - 3);
  };
  // Mean distance to the optimum over the model-based trials should beat the
  // random baseline's on the same budget.
  double adaptive = 0, random = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto a = tune(objective, space, 40, Strategy::kAdaptive, seed);
    const auto r = tune(objective, space, 40, Strategy::kRandom, seed);
    for (std::size_t i = 10; i < 40; ++i) {
      adaptive += std::abs(std::get<double>(a.trials[i].params.at("x")) - 3);
      random += std::abs(std::get<double>(r.trials[i].params.at("x")) - 3);
    }
  }
  EXPECT_LT(adaptive, random);
}

TEST(Tune, FailedTrialsAreRecordedAndSkipped) {
  int call = 0;
  const auto result = tune(
      [&](const Params&) -> double {
        ++call;
        if (call % 3 == 0) throw Error("boom");
        if (call == 4) return std::numeric_limits<double>::quiet_NaN();
        return call;
      },
      mixed_space(), 10, Strategy::kAdaptive, 1);
  ASSERT_EQ(result.trials.size(), 10u);
  EXPECT_TRUE(result.trials[2].failed);
  EXPECT_EQ(result.trials[2].score, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(result.trials[2].error, "boom");
  EXPECT_TRUE(result.trials[3].failed);
  EXPECT_EQ(result.best_index, 9);
  EXPECT_EQ(result.best_score, 10.0);

  EXPECT_THROW(tune([](const Params&) -> double { throw Error("always"); }, mixed_space(), 4,
                    Strategy::kRandom, 1),
               Error);
  EXPECT_THROW(tune([](const Params&) { return 1.0; }, mixed_space(), 0, Strategy::kRandom, 1),
               Error);
}

TEST(Tune, StrategyNames) {
  EXPECT_EQ(strategy_from_string("random"), Strategy::kRandom);
  EXPECT_EQ(strategy_from_string("adaptive"), Strategy::kAdaptive);
  EXPECT_EQ(to_string(Strategy::kAdaptive), "adaptive");
  EXPECT_THROW(strategy_from_string("grid"), Error);
}

TEST(Tune, TrialsCsvListsEveryTrial) {
  const auto space = mixed_space();
  const auto result = tune([](const Params& p) { return std::get<double>(p.at("x")); }, space, 6,
                           Strategy::kRandom, 5);
  testing::TempDir dir;
  write_trials_csv(result, space, dir / "trials.csv");
  std::istringstream in(testing::read_file(dir / "trials.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,score,x,n,lr,kind");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
}

TEST(Tune, CvAucObjectiveScoresSignal) {
  Rng rng(2);
  Dataset data;
  data.x = Matrix(300, 2);
  data.y.resize(300);
  for (std::size_t i = 0; i < 300; ++i) {
    data.y[i] = rng.uniform() < 0.2 ? 1 : 0;
    data.x(i, 0) = rng.normal() + 1.5 * data.y[i];
    data.x(i, 1) = rng.normal();
  }
  data.feature_names = {"signal", "noise"};
  gbdt::GbdtConfig base;
  CvObjectiveOptions options;
  options.folds = 3;
  options.seed = 4;
  const auto objective = cv_auc_objective(data, base, options);
  Params params{{"n_estimators", std::int64_t{20}}, {"max_depth", std::int64_t{2}},
                {"learning_rate", 0.2}};
  const double score = objective(params);
  EXPECT_GT(score, 0.75);
  EXPECT_LE(score, 1.0);
  EXPECT_EQ(objective(params), score);
  options.smote = resample::SmoteConfig{};
  const double with_smote = cv_auc_objective(data, base, options)(params);
  EXPECT_GT(with_smote, 0.75);
}

}  // namespace
}  // namespace fraudstack::tune
