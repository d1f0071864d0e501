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

#include "fraudstack/gbdt/trainer.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/parallel.h"
#include "fraudstack/common/random.h"
#include "fraudstack/gbdt/binning.h"
#include "fraudstack/gbdt/loss.h"
#include "fraudstack/gbdt/split.h"

namespace fraudstack::gbdt {
namespace {

using Bins = std::vector<std::vector<BinIndex>>;

struct FeatureSplit {
  std::size_t feature = 0;
  SplitCandidate split;
};

// A node under construction: its rows and gradient sums.
struct BuildNode {
  std::vector<std::size_t> rows;
  double grad = 0.0;
  double hess = 0.0;
  int depth = 0;
  std::size_t split_bin = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Bins& bins, const BinMapper& mapper, std::span<const double> grad,
              std::span<const double> hess, std::vector<std::size_t> features,
              const GbdtConfig& config)
      : bins_(bins),
        mapper_(mapper),
        grad_(grad),
        hess_(hess),
        features_(std::move(features)),
        config_(config) {
    offsets_.reserve(features_.size() + 1);
    std::size_t total = 0;
    for (std::size_t f : features_) {
      offsets_.push_back(total);
      total += mapper_.n_bins(f);
    }
    offsets_.push_back(total);
  }

  Tree build(std::vector<std::size_t> rows) {
    nodes_.clear();
    build_nodes_.clear();
    add_node(std::move(rows), 0);
    switch (config_.growth) {
      case Growth::kDepthWise:
        grow_depth_wise();
        break;
      case Growth::kLeafWise:
        grow_leaf_wise();
        break;
      case Growth::kSymmetric:
        grow_symmetric();
        break;
    }
    return finalize();
  }

 private:
  int add_node(std::vector<std::size_t> rows, int depth) {
    BuildNode node;
    for (std::size_t r : rows) {
      node.grad += grad_[r];
      node.hess += hess_[r];
    }
    node.rows = std::move(rows);
    node.depth = depth;
    build_nodes_.push_back(std::move(node));
    nodes_.emplace_back();
    return static_cast<int>(nodes_.size() - 1);
  }

  // Per-feature gradient/hessian histograms of one node, laid out by offsets_.
  void histogram(const BuildNode& node, std::vector<double>& grad_hist,
                 std::vector<double>& hess_hist) const {
    grad_hist.assign(offsets_.back(), 0.0);
    hess_hist.assign(offsets_.back(), 0.0);
    parallel_for(features_.size(), config_.jobs, [&](std::size_t k) {
      const auto& column = bins_[features_[k]];
      double* g = grad_hist.data() + offsets_[k];
      double* h = hess_hist.data() + offsets_[k];
      for (std::size_t r : node.rows) {
        g[column[r]] += grad_[r];
        h[column[r]] += hess_[r];
      }
    });
  }

  std::optional<FeatureSplit> find_split(const BuildNode& node) {
    if (node.rows.size() < 2) return std::nullopt;
    histogram(node, grad_hist_, hess_hist_);
    std::optional<FeatureSplit> best;
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const std::size_t width = offsets_[k + 1] - offsets_[k];
      if (width < 2) continue;
      auto split = best_split(std::span(grad_hist_).subspan(offsets_[k], width),
                              std::span(hess_hist_).subspan(offsets_[k], width),
                              config_.lambda, config_.gamma, config_.min_child_weight);
      if (split && (!best || split->gain > best->split.gain)) {
        best = FeatureSplit{features_[k], *split};
      }
    }
    return best;
  }

  std::pair<int, int> apply_split(int id, std::size_t feature, std::size_t bin) {
    std::vector<std::size_t> left, right;
    {
      const BuildNode& node = build_nodes_[static_cast<std::size_t>(id)];
      const auto& column = bins_[feature];
      for (std::size_t r : node.rows) (column[r] < bin ? left : right).push_back(r);
    }
    const int depth = build_nodes_[static_cast<std::size_t>(id)].depth + 1;
    const int l = add_node(std::move(left), depth);
    const int r = add_node(std::move(right), depth);
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = static_cast<int>(feature);
    n.threshold = mapper_.threshold(feature, bin);
    n.left = l;
    n.right = r;
    build_nodes_[static_cast<std::size_t>(id)].split_bin = bin;
    build_nodes_[static_cast<std::size_t>(id)].rows.clear();
    build_nodes_[static_cast<std::size_t>(id)].rows.shrink_to_fit();
    return {l, r};
  }

  void grow_depth_wise() {
    std::vector<int> frontier = {0};
    for (int depth = 0; depth < config_.max_depth && !frontier.empty(); ++depth) {
      std::vector<int> next;
      for (int id : frontier) {
        auto best = find_split(build_nodes_[static_cast<std::size_t>(id)]);
        if (!best) continue;
        auto [l, r] = apply_split(id, best->feature, best->split.bin);
        next.push_back(l);
        next.push_back(r);
      }
      frontier = std::move(next);
    }
  }

  void grow_leaf_wise() {
    if (config_.max_depth == 0) return;
    std::vector<std::pair<int, FeatureSplit>> candidates;
    auto consider = [&](int id) {
      const BuildNode& node = build_nodes_[static_cast<std::size_t>(id)];
      if (node.depth >= config_.max_depth) return;
      if (auto best = find_split(node)) candidates.emplace_back(id, *best);
    };
    consider(0);
    std::size_t leaves = 1;
    while (leaves < static_cast<std::size_t>(config_.max_leaves) && !candidates.empty()) {
      auto pick = candidates.begin();
      for (auto it = candidates.begin(); it != candidates.end(); ++it) {
        if (it->second.split.gain > pick->second.split.gain ||
            (it->second.split.gain == pick->second.split.gain && it->first < pick->first)) {
          pick = it;
        }
      }
      const auto [id, best] = *pick;
      candidates.erase(pick);
      auto [l, r] = apply_split(id, best.feature, best.split.bin);
      ++leaves;
      consider(l);
      consider(r);
    }
  }

  void grow_symmetric() {
    std::vector<int> level = {0};
    std::vector<double> total_gain(offsets_.back());
    std::vector<std::uint8_t> any_valid(offsets_.back());
    for (int depth = 0; depth < config_.max_depth; ++depth) {
      std::fill(total_gain.begin(), total_gain.end(), 0.0);
      std::fill(any_valid.begin(), any_valid.end(), 0);
      for (int id : level) {
        const BuildNode& node = build_nodes_[static_cast<std::size_t>(id)];
        if (node.rows.size() < 2) continue;
        histogram(node, grad_hist_, hess_hist_);
        for (std::size_t k = 0; k < features_.size(); ++k) {
          const std::size_t begin = offsets_[k];
          const std::size_t width = offsets_[k + 1] - begin;
          double grad_left = 0.0;
          double hess_left = 0.0;
          // Right sums from the top, as in best_split.
          std::vector<double> grad_right(width + 1, 0.0), hess_right(width + 1, 0.0);
          for (std::size_t b = width; b-- > 0;) {
            grad_right[b] = grad_right[b + 1] + grad_hist_[begin + b];
            hess_right[b] = hess_right[b + 1] + hess_hist_[begin + b];
          }
          for (std::size_t b = 1; b < width; ++b) {
            grad_left += grad_hist_[begin + b - 1];
            hess_left += hess_hist_[begin + b - 1];
            if (!valid_children(hess_left, hess_right[b])) continue;
            total_gain[begin + b] += split_gain(grad_left, hess_left, grad_right[b],
                                                hess_right[b], config_.lambda, config_.gamma);
            any_valid[begin + b] = 1;
          }
        }
      }
      std::optional<std::pair<std::size_t, std::size_t>> best;  // (k, bin)
      double best_gain = 0.0;
      for (std::size_t k = 0; k < features_.size(); ++k) {
        for (std::size_t b = 1; b < offsets_[k + 1] - offsets_[k]; ++b) {
          const std::size_t slot = offsets_[k] + b;
          if (any_valid[slot] && total_gain[slot] > best_gain) {
            best_gain = total_gain[slot];
            best = std::make_pair(k, b);
          }
        }
      }
      if (!best) return;
      const std::size_t feature = features_[best->first];
      const std::size_t bin = best->second;
      std::vector<int> next;
      for (int id : level) {
        const BuildNode& node = build_nodes_[static_cast<std::size_t>(id)];
        double hess_left = 0.0;
        double hess_right = 0.0;
        const auto& column = bins_[feature];
        for (std::size_t r : node.rows) (column[r] < bin ? hess_left : hess_right) += hess_[r];
        if (!valid_children(hess_left, hess_right)) continue;
        auto [l, r] = apply_split(id, feature, bin);
        next.push_back(l);
        next.push_back(r);
      }
      level = std::move(next);
    }
  }

  bool valid_children(double hess_left, double hess_right) const {
    return hess_left > 0.0 && hess_right > 0.0 && hess_left >= config_.min_child_weight &&
           hess_right >= config_.min_child_weight;
  }

  Tree finalize() {
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      Node& n = nodes_[i];
      if (n.is_leaf()) {
        const BuildNode& b = build_nodes_[i];
        const double denom = b.hess + config_.lambda;
        n.value = b.hess > 0.0 && denom > 0.0 ? -b.grad / denom * config_.learning_rate : 0.0;
        n.cover = b.hess;
      } else {
        n.cover = nodes_[static_cast<std::size_t>(n.left)].cover +
                  nodes_[static_cast<std::size_t>(n.right)].cover;
      }
    }
    return Tree(std::move(nodes_));
  }

  const Bins& bins_;
  const BinMapper& mapper_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::vector<std::size_t> features_;
  const GbdtConfig& config_;
  std::vector<std::size_t> offsets_;
  std::vector<Node> nodes_;
  std::vector<BuildNode> build_nodes_;
  std::vector<double> grad_hist_;
  std::vector<double> hess_hist_;
};

}  // namespace

GbdtModel train(const Matrix& x, std::span<const int> y, const GbdtConfig& config,
                std::vector<std::string> feature_names, TrainingTrace* trace) {
  config.validate();
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0 || d == 0) throw Error("cannot train on an empty matrix");
  if (y.size() != n) throw Error("label count does not match row count");
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < d; ++j) feature_names.push_back(fmt::format("f{}", j));
  }
  if (feature_names.size() != d) throw Error("feature name count does not match width");

  std::size_t positives = 0;
  for (int label : y) {
    if (label != 0 && label != 1) throw Error("labels must be 0 or 1");
    positives += static_cast<std::size_t>(label);
  }
  if (positives == 0 || positives == n) {
    throw Error("training labels contain a single class");
  }

  std::vector<double> weight(n);
  double weighted_pos = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = y[i] == 1 ? config.scale_pos_weight : 1.0;
    weighted_pos += weight[i] * y[i];
    weight_sum += weight[i];
  }
  const double rate = std::clamp(weighted_pos / weight_sum, 1e-6, 1.0 - 1e-6);

  GbdtModel model;
  model.base_score = std::log(rate / (1.0 - rate));
  model.config = config;
  model.feature_names = std::move(feature_names);

  const BinMapper mapper = BinMapper::fit(x, config.n_bins);
  const Bins bins = mapper.transform(x);

  std::vector<double> margin(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  if (trace) {
    trace->loss.clear();
    trace->loss.push_back(mean_logloss(y, margin, weight));
  }

  Rng rng(config.seed);
  const auto n_rows_sampled = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.subsample * static_cast<double>(n))));
  const auto n_features_sampled = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.colsample_bytree * static_cast<double>(d))));

  model.trees.reserve(static_cast<std::size_t>(config.n_estimators));
  for (int round = 0; round < config.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const GradHess gh = logloss_grad_hess(y[i], margin[i], weight[i]);
      grad[i] = gh.grad;
      hess[i] = gh.hess;
    }
    std::vector<std::size_t> rows = rng.sample_without_replacement(n, n_rows_sampled);
    std::sort(rows.begin(), rows.end());
    std::vector<std::size_t> features = rng.sample_without_replacement(d, n_features_sampled);
    std::sort(features.begin(), features.end());

    TreeBuilder builder(bins, mapper, grad, hess, std::move(features), config);
    Tree tree = builder.build(std::move(rows));
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(x.row(i));
    model.trees.push_back(std::move(tree));
    if (trace) trace->loss.push_back(mean_logloss(y, margin, weight));
  }
  return model;
}

GbdtModel train(const Dataset& data, const GbdtConfig& config, TrainingTrace* trace) {
  return train(data.x, data.y, config, data.feature_names, trace);
}

}  // namespace fraudstack::gbdt
