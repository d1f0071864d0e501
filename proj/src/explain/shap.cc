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

#include "fraudstack/explain/shap.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fraudstack/common/error.h"
#include "fraudstack/common/parallel.h"

namespace fraudstack::explain {
namespace {

struct PathElement {
  int feature;
  double zero_fraction;
  double one_fraction;
  double weight;
};

using Path = std::vector<PathElement>;

void extend_path(Path& path, double zero_fraction, double one_fraction, int feature) {
  const std::size_t depth = path.size();
  path.push_back({feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0});
  const double d = static_cast<double>(depth);
  for (std::size_t i = depth; i-- > 0;) {
    const double k = static_cast<double>(i);
    path[i + 1].weight += one_fraction * path[i].weight * (k + 1) / (d + 1);
    path[i].weight = zero_fraction * path[i].weight * (d - k) / (d + 1);
  }
}

void unwind_path(Path& path, std::size_t index) {
  const std::size_t depth = path.size() - 1;
  const double d = static_cast<double>(depth);
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one = path[depth].weight;
  for (std::size_t i = depth; i-- > 0;) {
    const double k = static_cast<double>(i);
    if (one_fraction != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next_one * (d + 1) / ((k + 1) * one_fraction);
      next_one = tmp - path[i].weight * zero_fraction * (d - k) / (d + 1);
    } else {
      path[i].weight = path[i].weight * (d + 1) / (zero_fraction * (d - k));
    }
  }
  for (std::size_t i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
  path.pop_back();
}

// Total weight of the path with element `index` removed.
double unwound_sum(const Path& path, std::size_t index) {
  const std::size_t depth = path.size() - 1;
  const double d = static_cast<double>(depth);
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one = path[depth].weight;
  double total = 0.0;
  for (std::size_t i = depth; i-- > 0;) {
    const double k = static_cast<double>(i);
    if (one_fraction != 0.0) {
      const double tmp = next_one * (d + 1) / ((k + 1) * one_fraction);
      total += tmp;
      next_one = path[i].weight - tmp * zero_fraction * (d - k) / (d + 1);
    } else {
      total += path[i].weight / zero_fraction / ((d - k) / (d + 1));
    }
  }
  return total;
}

bool goes_left(const gbdt::Node& node, std::span<const double> x) {
  return x[static_cast<std::size_t>(node.feature)] < node.threshold;
}

void recurse(const gbdt::Tree& tree, int index, std::span<const double> x, Path path,
             double zero_fraction, double one_fraction, int feature, std::vector<double>& phi) {
  extend_path(path, zero_fraction, one_fraction, feature);
  const auto& node = tree.node(index);
  if (node.is_leaf()) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      const auto& el = path[i];
      phi[static_cast<std::size_t>(el.feature)] +=
          unwound_sum(path, i) * (el.one_fraction - el.zero_fraction) * node.value;
    }
    return;
  }
  const int hot = goes_left(node, x) ? node.left : node.right;
  const int cold = hot == node.left ? node.right : node.left;
  const double hot_zero = tree.node(hot).cover / node.cover;
  const double cold_zero = tree.node(cold).cover / node.cover;
  double incoming_zero = 1.0;
  double incoming_one = 1.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i].feature == node.feature) {
      incoming_zero = path[i].zero_fraction;
      incoming_one = path[i].one_fraction;
      unwind_path(path, i);
      break;
    }
  }
  recurse(tree, hot, x, path, hot_zero * incoming_zero, incoming_one, node.feature, phi);
  recurse(tree, cold, x, std::move(path), cold_zero * incoming_zero, 0.0, node.feature, phi);
}

void check_covers(const gbdt::Tree& tree) {
  for (const auto& node : tree.nodes()) {
    if (!node.is_leaf() && !(node.cover > 0.0)) {
      throw Error("TreeSHAP needs a positive cover on every internal node");
    }
  }
}

void check_width(const gbdt::GbdtModel& model, std::size_t width) {
  if (width != model.n_features()) {
    throw Error(fmt::format("row has {} values, model expects {}", width, model.n_features()));
  }
}

double base_value(const gbdt::GbdtModel& model) {
  double base = model.base_score;
  for (const auto& tree : model.trees) base += tree.expected_value();
  return base;
}

// Cover-weighted expectation of one tree when only features in `coalition`
// (a bit mask) are known.
double conditional_value(const gbdt::Tree& tree, int index, std::span<const double> x,
                         std::uint32_t coalition) {
  const auto& node = tree.node(index);
  if (node.is_leaf()) return node.value;
  if (coalition & (1u << node.feature)) {
    return conditional_value(tree, goes_left(node, x) ? node.left : node.right, x, coalition);
  }
  const auto& left = tree.node(node.left);
  const auto& right = tree.node(node.right);
  return (left.cover * conditional_value(tree, node.left, x, coalition) +
          right.cover * conditional_value(tree, node.right, x, coalition)) /
         node.cover;
}

}  // namespace

ShapValues tree_shap(const gbdt::GbdtModel& model, std::span<const double> x) {
  check_width(model, x.size());
  ShapValues out;
  out.phi.assign(x.size(), 0.0);
  out.feature_names = model.feature_names;
  out.base_value = base_value(model);
  for (const auto& tree : model.trees) {
    if (tree.size() <= 1) continue;
    check_covers(tree);
    Path path;
    path.reserve(static_cast<std::size_t>(tree.depth()) + 2);
    recurse(tree, 0, x, std::move(path), 1.0, 1.0, -1, out.phi);
  }
  return out;
}

ShapValues exact_shapley_oracle(const gbdt::GbdtModel& model, std::span<const double> x) {
  check_width(model, x.size());
  const std::size_t n = x.size();
  if (n > 12) throw Error(fmt::format("exact Shapley enumeration supports at most 12 features, got {}", n));
  for (const auto& tree : model.trees) check_covers(tree);

  const std::uint32_t subsets = 1u << n;
  std::vector<double> value(subsets, model.base_score);
  for (std::uint32_t s = 0; s < subsets; ++s) {
    for (const auto& tree : model.trees) value[s] += conditional_value(tree, 0, x, s);
  }
  std::vector<double> factorial(n + 1, 1.0);
  for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);

  ShapValues out;
  out.phi.assign(n, 0.0);
  out.feature_names = model.feature_names;
  out.base_value = value[0];
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    for (std::uint32_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      const double weight = factorial[size] * factorial[n - size - 1] / factorial[n];
      out.phi[i] += weight * (value[s | bit] - value[s]);
    }
  }
  return out;
}

std::vector<FeatureImportance> shap_summary(const gbdt::GbdtModel& model, const Matrix& x,
                                            int jobs) {
  check_width(model, x.cols());
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Matrix phi(n, d);
  parallel_for(n, jobs, [&](std::size_t r) {
    const auto values = tree_shap(model, x.row(r));
    std::copy(values.phi.begin(), values.phi.end(), phi.row(r).begin());
  });
  std::vector<FeatureImportance> ranking(d);
  for (std::size_t f = 0; f < d; ++f) {
    auto& item = ranking[f];
    item.feature = f;
    item.name = model.feature_names[f];
    if (n == 0) continue;
    double sum_abs = 0.0, sum = 0.0;
    item.min = phi(0, f);
    item.max = phi(0, f);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = phi(r, f);
      sum_abs += std::abs(v);
      sum += v;
      item.min = std::min(item.min, v);
      item.max = std::max(item.max, v);
    }
    item.mean_abs = sum_abs / static_cast<double>(n);
    item.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (phi(r, f) - item.mean) * (phi(r, f) - item.mean);
    item.std = std::sqrt(ss / static_cast<double>(n));
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.mean_abs > b.mean_abs;
                   });
  return ranking;
}

std::vector<std::string> select_top_k(std::span<const FeatureImportance> ranking,
                                      std::size_t k) {
  if (k == 0 || k > ranking.size()) {
    throw Error(fmt::format("cannot select {} features out of {}", k, ranking.size()));
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(ranking[i].name);
  return names;
}

void write_shap_summary_csv(std::span<const FeatureImportance> ranking,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << "feature,mean_abs_shap,rank,mean_shap,std_shap,min_shap,max_shap\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = ranking[i];
    out << fmt::format("{},{},{},{},{},{},{}\n", r.name, r.mean_abs, i + 1, r.mean, r.std,
                       r.min, r.max);
  }
}

void write_shap_values_json(const ShapValues& values, double margin,
                            const std::filesystem::path& path) {
  nlohmann::json doc = {{"base_value", values.base_value},
                        {"margin", margin},
                        {"feature_names", values.feature_names},
                        {"phi", values.phi}};
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << doc.dump(1) << '\n';
}

}  // namespace fraudstack::explain
