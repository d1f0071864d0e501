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

#include "fraudstack/resample/smote.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/parallel.h"
#include "fraudstack/common/random.h"

namespace fraudstack::resample {

void SmoteConfig::validate() const {
  if (k_neighbors < 1) throw Error("SMOTE k_neighbors must be at least 1");
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw Error(fmt::format("SMOTE target ratio {} is outside (0, 1]", target_ratio));
  }
}

SmoteResult smote(const Matrix& x, std::span<const int> y, const SmoteConfig& config) {
  config.validate();
  if (x.rows() != y.size()) throw Error("SMOTE: feature and label row counts differ");

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw Error("SMOTE expects binary 0/1 labels");
    (y[i] == 1 ? positives : negatives).push_back(i);
  }
  SmoteResult out{x, std::vector<int>(y.begin(), y.end()), {}};
  if (positives.size() == negatives.size()) return out;

  const bool positive_minority = positives.size() < negatives.size();
  const std::vector<std::size_t>& minority = positive_minority ? positives : negatives;
  const std::size_t majority_count = positive_minority ? negatives.size() : positives.size();
  const auto target = static_cast<std::size_t>(
      std::llround(config.target_ratio * static_cast<double>(majority_count)));
  if (target <= minority.size()) return out;
  if (minority.size() < 2) {
    throw Error(fmt::format("SMOTE needs at least 2 minority rows, found {}",
                            minority.size()));
  }

  std::size_t k = static_cast<std::size_t>(config.k_neighbors);
  if (k >= minority.size()) {
    spdlog::warn("SMOTE k_neighbors={} >= minority count {}; clamping to {}", k,
                 minority.size(), minority.size() - 1);
    k = minority.size() - 1;
  }

  const std::size_t d = x.cols();
  std::vector<double> scale(d, 1.0);
  if (config.scale_features) {
    for (std::size_t j = 0; j < d; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t r = 0; r < x.rows(); ++r) {
        lo = std::min(lo, x(r, j));
        hi = std::max(hi, x(r, j));
      }
      scale[j] = hi > lo ? 1.0 / (hi - lo) : 0.0;
    }
  }

  const std::size_t m = minority.size();
  std::vector<std::vector<std::size_t>> neighbors(m);
  parallel_for(m, config.jobs, [&](std::size_t a) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(m - 1);
    const auto xa = x.row(minority[a]);
    for (std::size_t b = 0; b < m; ++b) {
      if (b == a) continue;
      const auto xb = x.row(minority[b]);
      double sum = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = (xa[j] - xb[j]) * scale[j];
        sum += diff * diff;
      }
      dist.emplace_back(sum, minority[b]);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    neighbors[a].reserve(k);
    for (std::size_t t = 0; t < k; ++t) neighbors[a].push_back(dist[t].second);
  });

  const int minority_label = positive_minority ? 1 : 0;
  const std::size_t needed = target - m;
  Rng rng(config.seed);
  std::vector<double> synthetic(d);
  out.origins.reserve(needed);
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t a = s % m;
    const std::size_t base = minority[a];
    const std::size_t neighbor = neighbors[a][rng.below(k)];
    const double u = rng.uniform();
    const auto xi = x.row(base);
    const auto xj = x.row(neighbor);
    for (std::size_t j = 0; j < d; ++j) synthetic[j] = xi[j] + u * (xj[j] - xi[j]);
    out.x.append_row(synthetic);
    out.y.push_back(minority_label);
    out.origins.push_back({base, neighbor, u});
  }
  return out;
}

Dataset smote(const Dataset& data, const SmoteConfig& config) {
  SmoteResult r = smote(data.x, data.y, config);
  return Dataset{std::move(r.x), std::move(r.y), data.feature_names};
}

}  // namespace fraudstack::resample
