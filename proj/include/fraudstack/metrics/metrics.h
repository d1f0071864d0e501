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

#ifndef FRAUDSTACK_METRICS_METRICS_H_
#define FRAUDSTACK_METRICS_METRICS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace fraudstack::metrics {

struct ConfusionMatrix {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  std::size_t total() const { return tn + fp + fn + tp; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> y, std::span<const int> predicted);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// Per-class scores with 0 for every zero denominator.
struct ClassificationScores {
  ClassScores negative;
  ClassScores positive;
  ClassScores macro;
  double accuracy = 0.0;
};

ClassificationScores prf1(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // predict positive when score >= threshold
};

struct RocCurve {
  // Starts at (0, 0) with an infinite threshold and ends at (1, 1).
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// Mann-Whitney AUC: (concordant + 0.5 tied pairs) / (n_pos n_neg), computed
// from mid-ranks. Throws when y has a single class.
double auc_rank(std::span<const int> y, std::span<const double> scores);

// ROC points at every unique score plus the rank-statistic AUC.
RocCurve roc_auc(std::span<const int> y, std::span<const double> scores);

// Trapezoidal area under a ROC polyline.
double trapezoid_area(std::span<const RocPoint> points);

struct PrPoint {
  double recall;
  double precision;
  double threshold;
};

struct PrCurve {
  // One point per unique score, thresholds descending.
  std::vector<PrPoint> points;
  // Step-wise area: sum over points of (recall_k - recall_{k-1}) precision_k.
  double auc = 0.0;
};

PrCurve pr_curve(std::span<const int> y, std::span<const double> scores);

struct ThresholdChoice {
  double threshold = 0.5;
  double f1 = 0.0;
};

double f1_at(std::span<const int> y, std::span<const double> scores, double threshold);

// Scans every unique score plus 0 and 1 as the cutoff of score >= t and keeps
// the highest F1; ties go to the lowest threshold.
ThresholdChoice best_f1_threshold(std::span<const int> y, std::span<const double> scores);

struct EvalReport {
  ConfusionMatrix confusion;
  ClassificationScores scores;
  RocCurve roc;
  PrCurve pr;
  double threshold = 0.5;
  std::size_t n_rows = 0;
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> y, double threshold);

nlohmann::json to_json(const EvalReport& report);

// metrics.json, roc.csv, pr.csv and confusion.csv under `dir`.
void write_report(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace fraudstack::metrics

#endif  // FRAUDSTACK_METRICS_METRICS_H_
