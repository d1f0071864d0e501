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

#include "fraudstack/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::metrics {
namespace {

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

ClassScores class_scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s;
  s.precision = ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  s.recall = ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  s.f1 = s.precision + s.recall > 0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  s.support = tp + fn;
  return s;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(fmt::format("length mismatch: {} labels vs {} values", a, b));
}

// Indices sorted by descending score, ties by index.
std::vector<std::size_t> descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> y) {
  std::size_t pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw Error("labels must be 0 or 1");
    pos += static_cast<std::size_t>(v);
  }
  return {pos, y.size() - pos};
}

nlohmann::json scores_json(const ClassScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y, std::span<const int> predicted) {
  check_lengths(y.size(), predicted.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1) {
      predicted[i] == 1 ? ++cm.tp : ++cm.fn;
    } else {
      predicted[i] == 1 ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

ClassificationScores prf1(const ConfusionMatrix& cm) {
  ClassificationScores out;
  out.positive = class_scores(cm.tp, cm.fp, cm.fn);
  out.negative = class_scores(cm.tn, cm.fn, cm.fp);
  out.macro.precision = 0.5 * (out.positive.precision + out.negative.precision);
  out.macro.recall = 0.5 * (out.positive.recall + out.negative.recall);
  out.macro.f1 = 0.5 * (out.positive.f1 + out.negative.f1);
  out.macro.support = cm.total();
  out.accuracy = ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
  return out;
}

double auc_rank(std::span<const int> y, std::span<const double> scores) {
  check_lengths(y.size(), scores.size());
  const auto [n_pos, n_neg] = class_counts(y);
  if (n_pos == 0 || n_neg == 0) throw Error("AUC is undefined for a single class");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      group_pos += static_cast<std::size_t>(y[order[j]]);
      ++j;
    }
    // Ranks i+1 .. j share the mid-rank.
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += mid_rank * static_cast<double>(group_pos);
    i = j;
  }
  const double p = static_cast<double>(n_pos);
  const double q = static_cast<double>(n_neg);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

RocCurve roc_auc(std::span<const int> y, std::span<const double> scores) {
  RocCurve curve;
  curve.auc = auc_rank(y, scores);
  const auto [n_pos, n_neg] = class_counts(y);
  const auto order = descending(scores);
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      y[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos), s});
  }
  return curve;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

PrCurve pr_curve(std::span<const int> y, std::span<const double> scores) {
  check_lengths(y.size(), scores.size());
  const auto [n_pos, n_neg] = class_counts(y);
  if (n_pos == 0) throw Error("precision-recall curve needs at least one positive");
  PrCurve curve;
  const auto order = descending(scores);
  std::size_t tp = 0, fp = 0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      y[order[i]] == 1 ? ++tp : ++fp;
      ++i;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    curve.points.push_back({recall, precision, s});
    curve.auc += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return curve;
}

double f1_at(std::span<const int> y, std::span<const double> scores, double threshold) {
  check_lengths(y.size(), scores.size());
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (y[i] == 1) {
      predicted ? ++tp : ++fn;
    } else if (predicted) {
      ++fp;
    }
  }
  const double den = static_cast<double>(2 * tp + fp + fn);
  return den > 0 ? 2.0 * static_cast<double>(tp) / den : 0.0;
}

ThresholdChoice best_f1_threshold(std::span<const int> y, std::span<const double> scores) {
  check_lengths(y.size(), scores.size());
  const auto [n_pos, n_neg] = class_counts(y);
  if (n_pos == 0) throw Error("F1 threshold search needs at least one positive");

  std::vector<double> candidates(scores.begin(), scores.end());
  candidates.push_back(0.0);
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Scores ascending; positives/negatives at or above each candidate follow
  // from a single sweep.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::size_t below_pos = 0, below_neg = 0, cursor = 0;
  ThresholdChoice best{candidates.front(), -1.0};
  for (double t : candidates) {
    while (cursor < order.size() && scores[order[cursor]] < t) {
      y[order[cursor]] == 1 ? ++below_pos : ++below_neg;
      ++cursor;
    }
    const std::size_t tp = n_pos - below_pos;
    const std::size_t fp = n_neg - below_neg;
    const std::size_t fn = below_pos;
    const double den = static_cast<double>(2 * tp + fp + fn);
    const double f1 = den > 0 ? 2.0 * static_cast<double>(tp) / den : 0.0;
    if (f1 > best.f1) best = {t, f1};
  }
  return best;
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> y, double threshold) {
  check_lengths(y.size(), scores.size());
  std::vector<int> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= threshold ? 1 : 0;
  EvalReport report;
  report.confusion = confusion(y, predicted);
  report.scores = prf1(report.confusion);
  report.roc = roc_auc(y, scores);
  report.pr = pr_curve(y, scores);
  report.threshold = threshold;
  report.n_rows = y.size();
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json roc = nlohmann::json::array();
  for (const auto& p : report.roc.points) {
    roc.push_back({p.fpr, p.tpr, std::isinf(p.threshold) ? nlohmann::json("inf")
                                                         : nlohmann::json(p.threshold)});
  }
  nlohmann::json pr = nlohmann::json::array();
  for (const auto& p : report.pr.points) pr.push_back({p.recall, p.precision, p.threshold});
  const auto& cm = report.confusion;
  return {{"n_rows", report.n_rows},
          {"threshold", report.threshold},
          {"accuracy", report.scores.accuracy},
          {"classes",
           {{"0", scores_json(report.scores.negative)}, {"1", scores_json(report.scores.positive)}}},
          {"macro_avg", scores_json(report.scores.macro)},
          {"auc_roc", report.roc.auc},
          {"auc_pr", report.pr.auc},
          {"confusion", {{"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}, {"tp", cm.tp}}},
          {"roc_points", std::move(roc)},
          {"pr_points", std::move(pr)}};
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw Error(fmt::format("cannot write '{}'", (dir / name).string()));
    return out;
  };
  {
    auto out = open("metrics.json");
    out << to_json(report).dump(1) << '\n';
  }
  {
    auto out = open("roc.csv");
    out << "fpr,tpr,threshold\n";
    for (const auto& p : report.roc.points) {
      out << fmt::format("{},{},{}\n", p.fpr, p.tpr, p.threshold);
    }
  }
  {
    auto out = open("pr.csv");
    out << "recall,precision,threshold\n";
    for (const auto& p : report.pr.points) {
      out << fmt::format("{},{},{}\n", p.recall, p.precision, p.threshold);
    }
  }
  {
    auto out = open("confusion.csv");
    const auto& cm = report.confusion;
    out << "actual,predicted_0,predicted_1\n";
    out << fmt::format("0,{},{}\n1,{},{}\n", cm.tn, cm.fp, cm.fn, cm.tp);
  }
}

}  // namespace fraudstack::metrics
