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
#include <set>

#include <gtest/gtest.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"
#include "fraudstack/metrics/metrics.h"
#include "test_util.h"

namespace fraudstack::metrics {
namespace {

struct Case {
  std::vector<int> y;
  std::vector<double> scores;
};

// Scores are rounded to a coarse grid so ties are common.
Case random_case(Rng& rng, std::size_t n) {
  Case c;
  c.y.resize(n);
  c.scores.resize(n);
  const double rate = rng.uniform(0.05, 0.6);
  for (std::size_t i = 0; i < n; ++i) {
    c.y[i] = rng.uniform() < rate ? 1 : 0;
    c.scores[i] = std::round((rng.uniform() + 0.3 * c.y[i]) * 40.0) / 40.0;
  }
  c.y[0] = 1;
  c.y[1] = 0;
  return c;
}

double brute_auc(const Case& c) {
  double good = 0, pairs = 0;
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    if (c.y[i] != 1) continue;
    for (std::size_t j = 0; j < c.y.size(); ++j) {
      if (c.y[j] != 0) continue;
      pairs += 1;
      if (c.scores[i] > c.scores[j]) good += 1;
      if (c.scores[i] == c.scores[j]) good += 0.5;
    }
  }
  return good / pairs;
}

double brute_f1(const Case& c, double t) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    const bool pred = c.scores[i] >= t;
    if (pred && c.y[i] == 1) tp += 1;
    if (pred && c.y[i] == 0) fp += 1;
    if (!pred && c.y[i] == 1) fn += 1;
  }
  return 2 * tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
}

TEST(Confusion, Counts) {
  const std::vector<int> y = {1, 0, 1, 0, 1};
  const std::vector<int> p = {1, 1, 0, 0, 1};
  const auto cm = confusion(y, p);
  EXPECT_EQ(cm, (ConfusionMatrix{1, 1, 1, 2}));
  EXPECT_EQ(cm.total(), 5u);
  std::vector<int> flipped(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) flipped[i] = 1 - y[i];
  const auto inv = confusion(y, flipped);
  EXPECT_EQ(inv.tp + inv.tn, 0u);
  const auto same = confusion(y, y);
  EXPECT_EQ(same.fp + same.fn, 0u);
  EXPECT_THROW(confusion(y, std::vector<int>{1}), Error);
}

TEST(Prf1, ReportedConfusionCounts) {
  const ConfusionMatrix cm{113453, 481, 1825, 112192};
  const auto s = prf1(cm);
  EXPECT_NEAR(s.positive.recall, 0.9840, 1e-4);
  EXPECT_NEAR(s.positive.precision, 0.9957, 1e-4);
  EXPECT_NEAR(s.accuracy, 0.9899, 1e-4);
  EXPECT_NEAR(s.negative.recall, 113453.0 / (113453 + 481), 1e-15);
}

TEST(Prf1, ZeroDenominatorConventions) {
  const auto s = prf1(ConfusionMatrix{10, 0, 5, 0});
  EXPECT_EQ(s.positive.precision, 0.0);
  EXPECT_EQ(s.positive.recall, 0.0);
  EXPECT_EQ(s.positive.f1, 0.0);
  const auto empty = prf1(ConfusionMatrix{});
  EXPECT_EQ(empty.accuracy, 0.0);
}

TEST(Auc, SmallCases) {
  EXPECT_EQ(auc_rank(std::vector<int>{0, 1}, std::vector<double>{0.2, 0.9}), 1.0);
  EXPECT_EQ(auc_rank(std::vector<int>{0, 1, 1, 0}, std::vector<double>{3, 3, 3, 3}), 0.5);
  EXPECT_THROW(auc_rank(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2}), Error);
}

TEST(Auc, MatchesPairCountingAndTrapezoid) {
  Rng rng(2024);
  for (int t = 0; t < 50; ++t) {
    const Case c = random_case(rng, 2 + rng.below(999));
    const auto curve = roc_auc(c.y, c.scores);
    EXPECT_NEAR(curve.auc, brute_auc(c), 1e-12);
    EXPECT_NEAR(trapezoid_area(curve.points), curve.auc, 1e-12);
    EXPECT_EQ(curve.points.front().fpr, 0.0);
    EXPECT_EQ(curve.points.front().tpr, 0.0);
    EXPECT_EQ(curve.points.back().fpr, 1.0);
    EXPECT_EQ(curve.points.back().tpr, 1.0);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  Rng rng(5);
  const Case c = random_case(rng, 300);
  std::vector<double> transformed(c.scores.size());
  for (std::size_t i = 0; i < transformed.size(); ++i) transformed[i] = std::exp(3 * c.scores[i]) - 7;
  EXPECT_EQ(auc_rank(c.y, c.scores), auc_rank(c.y, transformed));
}

TEST(PrCurve, MatchesPerThresholdRecomputation) {
  Rng rng(77);
  const Case c = random_case(rng, 100);
  const auto curve = pr_curve(c.y, c.scores);
  std::set<double, std::greater<>> unique(c.scores.begin(), c.scores.end());
  ASSERT_EQ(curve.points.size(), unique.size());
  double area = 0, prev_recall = 0;
  std::size_t k = 0;
  const double positives = static_cast<double>(std::count(c.y.begin(), c.y.end(), 1));
  for (double t : unique) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < c.y.size(); ++i) {
      if (c.scores[i] >= t) (c.y[i] == 1 ? tp : fp) += 1;
    }
    EXPECT_EQ(curve.points[k].threshold, t);
    EXPECT_EQ(curve.points[k].recall, tp / positives);
    EXPECT_EQ(curve.points[k].precision, tp / (tp + fp));
    area += (tp / positives - prev_recall) * (tp / (tp + fp));
    prev_recall = tp / positives;
    ++k;
  }
  EXPECT_NEAR(curve.auc, area, 1e-15);
}

TEST(PrCurve, PerfectAndConstantScores) {
  const std::vector<int> y = {0, 1, 0, 1, 0};
  EXPECT_EQ(pr_curve(y, std::vector<double>{0.1, 0.9, 0.2, 0.8, 0.3}).auc, 1.0);
  const auto flat = pr_curve(y, std::vector<double>(5, 0.5));
  ASSERT_EQ(flat.points.size(), 1u);
  EXPECT_EQ(flat.points[0].recall, 1.0);
  EXPECT_NEAR(flat.points[0].precision, 0.4, 1e-15);
  EXPECT_THROW(pr_curve(std::vector<int>{0, 0}, std::vector<double>{0.1, 0.2}), Error);
}

TEST(BestF1, WorkedExample) {
  const auto best = best_f1_threshold(std::vector<int>{0, 0, 1, 1},
                                      std::vector<double>{0.1, 0.4, 0.35, 0.8});
  EXPECT_EQ(best.threshold, 0.35);
  EXPECT_NEAR(best.f1, 0.8, 1e-15);
}

TEST(BestF1, EqualsExhaustiveRescan) {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const Case c = random_case(rng, 2 + rng.below(200));
    const auto best = best_f1_threshold(c.y, c.scores);
    std::set<double> candidates(c.scores.begin(), c.scores.end());
    candidates.insert(0.0);
    candidates.insert(1.0);
    double best_f1 = -1, best_t = 0;
    for (double cand : candidates) {
      const double f = brute_f1(c, cand);
      if (f > best_f1) {
        best_f1 = f;
        best_t = cand;
      }
    }
    EXPECT_EQ(best.threshold, best_t);
    EXPECT_NEAR(best.f1, best_f1, 1e-12);
    EXPECT_NEAR(f1_at(c.y, c.scores, best.threshold), best.f1, 1e-12);
  }
}

TEST(BestF1, PerfectSeparation) {
  const auto best = best_f1_threshold(std::vector<int>{0, 1, 0, 1},
                                      std::vector<double>{0.1, 0.7, 0.3, 0.9});
  EXPECT_EQ(best.f1, 1.0);
  EXPECT_EQ(best.threshold, 0.7);
}

TEST(Evaluate, PerfectPredictionsAndFiles) {
  fraudstack::testing::TempDir dir;
  const std::vector<int> y = {0, 1, 0, 1, 1};
  const std::vector<double> s = {0.0, 1.0, 0.0, 1.0, 1.0};
  const auto report = evaluate(s, y, 0.5);
  EXPECT_EQ(report.scores.accuracy, 1.0);
  EXPECT_EQ(report.scores.positive.f1, 1.0);
  EXPECT_EQ(report.scores.negative.f1, 1.0);
  EXPECT_EQ(report.roc.auc, 1.0);
  write_report(report, dir.path());
  for (const char* f : {"metrics.json", "roc.csv", "pr.csv", "confusion.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(fraudstack::testing::read_file(dir / "confusion.csv"),
            "actual,predicted_0,predicted_1\n0,2,0\n1,0,3\n");
  const auto doc = nlohmann::json::parse(fraudstack::testing::read_file(dir / "metrics.json"));
  EXPECT_EQ(doc.at("auc_roc"), 1.0);
}

}  // namespace
}  // namespace fraudstack::metrics
