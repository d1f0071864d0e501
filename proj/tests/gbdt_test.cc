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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"
#include "fraudstack/gbdt/binning.h"
#include "fraudstack/gbdt/config.h"
#include "fraudstack/gbdt/loss.h"
#include "fraudstack/gbdt/model.h"
#include "fraudstack/gbdt/serialize.h"
#include "fraudstack/gbdt/split.h"
#include "fraudstack/gbdt/trainer.h"
#include "test_util.h"

namespace fraudstack::gbdt {
namespace {

struct Problem {
  Matrix x;
  std::vector<int> y;
};

// Four XOR corners repeated with unequal multiplicities. With equal counts
// every single split has zero gain and no greedy learner can start.
Problem xor_problem() {
  const double corners[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  const int labels[4] = {0, 0, 1, 1};
  const int counts[4] = {40, 25, 30, 15};
  Problem p;
  std::vector<double> values;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < counts[c]; ++i) {
      values.push_back(corners[c][0]);
      values.push_back(corners[c][1]);
      p.y.push_back(labels[c]);
    }
  }
  p.x = Matrix(p.y.size(), 2, std::move(values));
  return p;
}

Problem noisy_linear(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Problem p{Matrix(n, d), std::vector<int>(n)};
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0;
    for (std::size_t c = 0; c < d; ++c) {
      p.x(r, c) = std::round(rng.normal() * 4) / 4;
      s += p.x(r, c) * (c % 2 == 0 ? 1.0 : -0.5);
    }
    p.y[r] = s + rng.normal() > 0 ? 1 : 0;
  }
  return p;
}

GbdtConfig full_sampling(Growth growth) {
  GbdtConfig cfg;
  cfg.growth = growth;
  cfg.subsample = 1.0;
  cfg.colsample_bytree = 1.0;
  return cfg;
}

double accuracy(const GbdtModel& m, const Problem& p) {
  const auto proba = m.predict_proba(p.x);
  std::size_t ok = 0;
  for (std::size_t r = 0; r < p.y.size(); ++r) ok += (proba[r] >= 0.5) == (p.y[r] == 1);
  return static_cast<double>(ok) / static_cast<double>(p.y.size());
}

TEST(Loss, GradientAndHessianMatchFiniteDifferences) {
  const double eps = 1e-5;
  for (int y : {0, 1}) {
    for (double m : {-6.0, -1.3, 0.0, 0.4, 2.5, 7.0}) {
      for (double w : {1.0, 3.5}) {
        const auto gh = logloss_grad_hess(y, m, w);
        const double fd_grad = (logloss(y, m + eps, w) - logloss(y, m - eps, w)) / (2 * eps);
        const double fd_hess =
            (logloss_grad_hess(y, m + eps, w).grad - logloss_grad_hess(y, m - eps, w).grad) /
            (2 * eps);
        EXPECT_NEAR(gh.grad, fd_grad, 1e-6) << y << " " << m;
        EXPECT_NEAR(gh.hess, fd_hess, 1e-4) << y << " " << m;
      }
    }
  }
}

TEST(Loss, StableAtExtremeMargins) {
  EXPECT_TRUE(std::isfinite(logloss(1, -800.0, 1.0)));
  EXPECT_NEAR(logloss(1, -800.0, 1.0), 800.0, 1e-9);
  EXPECT_NEAR(logloss(0, -800.0, 1.0), 0.0, 1e-12);
}

TEST(Split, GainFormula) {
  // G_L=-2,H_L=1,G_R=3,H_R=2, lambda=1, gamma=0.1
  const double expected = 0.5 * (4.0 / 2.0 + 9.0 / 3.0 - 1.0 / 4.0) - 0.1;
  EXPECT_NEAR(split_gain(-2, 1, 3, 2, 1, 0.1), expected, 1e-15);
}

TEST(Split, BestSplitPicksLowestBinOnTies) {
  const std::vector<double> g = {-1, 0, 0, 1};
  const std::vector<double> h = {1, 0, 0, 1};
  const auto best = best_split(g, h, 0.0, 0.0, 1e-3);
  ASSERT_TRUE(best.has_value());
  EXPECT_EQ(best->bin, 1u);
  EXPECT_DOUBLE_EQ(best->grad_left, -1);
  EXPECT_DOUBLE_EQ(best->hess_right, 1);
}

TEST(Split, NoPositiveGainGivesNothing) {
  const std::vector<double> g = {1, 1};
  const std::vector<double> h = {1, 1};
  EXPECT_FALSE(best_split(g, h, 1.0, 0.0).has_value());
}

TEST(Binning, DistinctValuesGetOwnBins) {
  Matrix x(5, 1, {3, 1, 2, 3, 1});
  const auto mapper = BinMapper::fit(x, 256);
  EXPECT_EQ(mapper.cuts(0), (std::vector<double>{2, 3}));
  EXPECT_EQ(mapper.bin(0, 1.0), 0);
  EXPECT_EQ(mapper.bin(0, 2.0), 1);
  EXPECT_EQ(mapper.bin(0, 2.5), 1);
  EXPECT_EQ(mapper.bin(0, 9.0), 2);
  EXPECT_EQ(mapper.bin(0, std::numeric_limits<double>::quiet_NaN()), 2);
}

TEST(Binning, QuantileCutsRespectBinBudget) {
  Rng rng(1);
  Matrix x(1000, 1);
  for (std::size_t r = 0; r < 1000; ++r) x(r, 0) = rng.normal();
  const auto mapper = BinMapper::fit(x, 16);
  EXPECT_LE(mapper.n_bins(0), 16u);
  EXPECT_TRUE(std::is_sorted(mapper.cuts(0).begin(), mapper.cuts(0).end()));
  for (std::size_t b = 1; b < mapper.n_bins(0); ++b) {
    const double t = mapper.threshold(0, b);
    for (std::size_t r = 0; r < 1000; ++r) {
      ASSERT_EQ(x(r, 0) < t, mapper.bin(0, x(r, 0)) < b);
    }
  }
}

// Exhaustive root split over every feature and every distinct value as the
// `x < t` threshold, with gradients taken at the base score.
struct ExactSplit {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
};

ExactSplit exact_root_split(const Problem& p, double lambda) {
  const double n = static_cast<double>(p.y.size());
  const double rate = std::accumulate(p.y.begin(), p.y.end(), 0.0) / n;
  const double prob = rate;
  std::vector<double> g(p.y.size()), h(p.y.size());
  for (std::size_t r = 0; r < p.y.size(); ++r) {
    g[r] = prob - p.y[r];
    h[r] = prob * (1 - prob);
  }
  const double G = std::accumulate(g.begin(), g.end(), 0.0);
  const double H = std::accumulate(h.begin(), h.end(), 0.0);
  ExactSplit best;
  for (std::size_t f = 0; f < p.x.cols(); ++f) {
    std::set<double> values;
    for (std::size_t r = 0; r < p.y.size(); ++r) values.insert(p.x(r, f));
    for (auto it = std::next(values.begin()); it != values.end(); ++it) {
      double gl = 0, hl = 0;
      for (std::size_t r = 0; r < p.y.size(); ++r) {
        if (p.x(r, f) < *it) {
          gl += g[r];
          hl += h[r];
        }
      }
      const double gr = G - gl, hr = H - hl;
      const double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                                 G * G / (H + lambda));
      if (gain > best.gain + 1e-12) best = {static_cast<int>(f), *it, gain};
    }
  }
  return best;
}

TEST(Trainer, HistogramRootSplitEqualsExactGreedy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Problem p = noisy_linear(300, 4, seed);
    GbdtConfig cfg = full_sampling(Growth::kDepthWise);
    cfg.n_estimators = 1;
    cfg.max_depth = 1;
    cfg.learning_rate = 1.0;
    const auto model = train(p.x, p.y, cfg);
    const auto exact = exact_root_split(p, cfg.lambda);
    const auto& root = model.trees[0].node(0);
    ASSERT_FALSE(root.is_leaf());
    EXPECT_EQ(root.feature, exact.feature) << "seed " << seed;
    EXPECT_EQ(root.threshold, exact.threshold) << "seed " << seed;
  }
}

TEST(Trainer, LeafValuesAreNewtonSteps) {
  const Problem p = noisy_linear(200, 3, 4);
  GbdtConfig cfg = full_sampling(Growth::kDepthWise);
  cfg.n_estimators = 1;
  cfg.max_depth = 1;
  cfg.learning_rate = 0.7;
  const auto model = train(p.x, p.y, cfg);
  const auto& tree = model.trees[0];
  const double prob = sigmoid(model.base_score);
  for (int side : {tree.node(0).left, tree.node(0).right}) {
    double g = 0, h = 0;
    for (std::size_t r = 0; r < p.y.size(); ++r) {
      if (tree.leaf_index(p.x.row(r)) != side) continue;
      g += prob - p.y[r];
      h += prob * (1 - prob);
    }
    EXPECT_NEAR(tree.node(side).value, -g / (h + cfg.lambda) * 0.7, 1e-12);
    EXPECT_NEAR(tree.node(side).cover, h, 1e-9);
  }
  EXPECT_NEAR(tree.node(0).cover, tree.node(1).cover + tree.node(2).cover, 1e-12);
}

TEST(Trainer, LossNonIncreasingWithFullSampling) {
  const Problem p = noisy_linear(500, 5, 7);
  for (Growth growth : {Growth::kDepthWise, Growth::kLeafWise, Growth::kSymmetric}) {
    GbdtConfig cfg = full_sampling(growth);
    cfg.n_estimators = 40;
    cfg.max_depth = 4;
    cfg.learning_rate = 0.3;
    TrainingTrace trace;
    train(p.x, p.y, cfg, {}, &trace);
    ASSERT_EQ(trace.loss.size(), 41u);
    for (std::size_t i = 1; i < trace.loss.size(); ++i) {
      EXPECT_LE(trace.loss[i], trace.loss[i - 1] + 1e-12) << to_string(growth) << " round " << i;
    }
  }
}

TEST(Trainer, XorSolvedAtDepthTwo) {
  const Problem p = xor_problem();
  for (Growth growth : {Growth::kDepthWise, Growth::kLeafWise, Growth::kSymmetric}) {
    GbdtConfig cfg = full_sampling(growth);
    cfg.n_estimators = 20;
    cfg.max_depth = 2;
    cfg.max_leaves = 4;
    cfg.learning_rate = 0.5;
    const auto model = train(p.x, p.y, cfg);
    EXPECT_EQ(accuracy(model, p), 1.0) << to_string(growth);
  }
}

TEST(Trainer, GrowthShapes) {
  const Problem p = noisy_linear(800, 6, 9);
  GbdtConfig cfg = full_sampling(Growth::kLeafWise);
  cfg.n_estimators = 5;
  cfg.max_depth = 8;
  cfg.max_leaves = 5;
  for (const auto& tree : train(p.x, p.y, cfg).trees) {
    EXPECT_LE(tree.leaf_count(), 5u);
    EXPECT_LE(tree.depth(), 8);
  }
  cfg.growth = Growth::kDepthWise;
  cfg.max_depth = 3;
  for (const auto& tree : train(p.x, p.y, cfg).trees) EXPECT_LE(tree.depth(), 3);
  cfg.growth = Growth::kSymmetric;
  for (const auto& tree : train(p.x, p.y, cfg).trees) {
    // Every internal node of a level tests the same feature and threshold.
    std::vector<std::pair<int, double>> level_split(4, {-2, 0.0});
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    while (!stack.empty()) {
      const auto [i, depth] = stack.back();
      stack.pop_back();
      const auto& node = tree.node(i);
      if (node.is_leaf()) continue;
      auto& s = level_split[static_cast<std::size_t>(depth)];
      if (s.first == -2) s = {node.feature, node.threshold};
      EXPECT_EQ(s.first, node.feature);
      EXPECT_EQ(s.second, node.threshold);
      stack.push_back({node.left, depth + 1});
      stack.push_back({node.right, depth + 1});
    }
  }
}

TEST(Trainer, DeterministicAndJobIndependent) {
  const Problem p = noisy_linear(600, 5, 11);
  GbdtConfig cfg;
  cfg.n_estimators = 15;
  cfg.seed = 99;
  const auto a = train(p.x, p.y, cfg);
  cfg.jobs = 4;
  const auto b = train(p.x, p.y, cfg);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  cfg.seed = 100;
  EXPECT_NE(to_json(a).dump(), to_json(train(p.x, p.y, cfg)).dump());
}

TEST(Trainer, ZeroTreesPredictBaseRate) {
  const Problem p = noisy_linear(100, 2, 1);
  GbdtConfig cfg;
  cfg.n_estimators = 0;
  const auto model = train(p.x, p.y, cfg);
  const double rate = std::accumulate(p.y.begin(), p.y.end(), 0.0) / 100.0;
  EXPECT_NEAR(model.predict_proba(p.x.row(0)), rate, 1e-12);
}

TEST(Trainer, MissingValuesGoRight) {
  Problem p{Matrix(6, 1, {0, 0, 0, 1, 1, NAN}), {0, 0, 0, 1, 1, 1}};
  GbdtConfig cfg = full_sampling(Growth::kDepthWise);
  cfg.n_estimators = 10;
  cfg.max_depth = 1;
  cfg.learning_rate = 1.0;
  const auto model = train(p.x, p.y, cfg);
  EXPECT_GT(model.predict_proba(p.x.row(5)), 0.5);
  EXPECT_LT(model.predict_proba(p.x.row(0)), 0.5);
}

TEST(Trainer, RejectsBadInput) {
  const Problem p = noisy_linear(20, 2, 1);
  const std::vector<int> one_class(20, 0);
  EXPECT_THROW(train(p.x, one_class, GbdtConfig{}), Error);
  std::vector<int> bad = p.y;
  bad[0] = 2;
  EXPECT_THROW(train(p.x, bad, GbdtConfig{}), Error);
  GbdtConfig cfg;
  cfg.learning_rate = 0;
  EXPECT_THROW(train(p.x, p.y, cfg), Error);
  EXPECT_THROW(train(p.x, p.y, GbdtConfig{}, {"only_one"}), Error);
}

TEST(Model, WidthMismatchThrows) {
  const Problem p = noisy_linear(50, 3, 2);
  GbdtConfig cfg;
  cfg.n_estimators = 2;
  const auto model = train(p.x, p.y, cfg);
  const std::vector<double> short_row = {1.0};
  EXPECT_THROW(model.predict_margin(short_row), Error);
}

TEST(Serialize, RoundTripPredictsBitForBit) {
  fraudstack::testing::TempDir dir;
  const Problem p = noisy_linear(400, 4, 5);
  for (Growth growth : {Growth::kDepthWise, Growth::kLeafWise, Growth::kSymmetric}) {
    GbdtConfig cfg;
    cfg.growth = growth;
    cfg.n_estimators = 10;
    const auto model = train(p.x, p.y, cfg, {"a", "b", "c", "d"});
    save_model(model, dir / "m.json");
    const auto loaded = load_model(dir / "m.json");
    ASSERT_EQ(loaded.trees.size(), model.trees.size());
    EXPECT_EQ(loaded.base_score, model.base_score);
    EXPECT_EQ(loaded.feature_names, model.feature_names);
    EXPECT_EQ(loaded.predict_margin(p.x), model.predict_margin(p.x));
    EXPECT_EQ(to_json(loaded), to_json(model));
  }
}

TEST(Serialize, RejectsWrongVersionAndGarbage) {
  const Problem p = noisy_linear(50, 2, 5);
  GbdtConfig cfg;
  cfg.n_estimators = 1;
  auto doc = to_json(train(p.x, p.y, cfg));
  doc["format_version"] = 99;
  EXPECT_THROW(from_json(doc), Error);
  EXPECT_THROW(from_json(nlohmann::json::parse(R"({"kind": "gbdt"})")), Error);
}

TEST(Config, SetAndJsonRoundTrip) {
  GbdtConfig cfg;
  cfg.set("max_depth", "4");
  cfg.set("growth", "symmetric");
  cfg.set("learning_rate", "0.05");
  EXPECT_EQ(cfg.max_depth, 4);
  EXPECT_EQ(cfg.growth, Growth::kSymmetric);
  const auto again = GbdtConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
  EXPECT_THROW(cfg.set("nonsense", "1"), Error);
  EXPECT_THROW(growth_from_string("sideways"), Error);
}

}  // namespace
}  // namespace fraudstack::gbdt
