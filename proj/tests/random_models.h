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

#ifndef FRAUDSTACK_TESTS_RANDOM_MODELS_H_
#define FRAUDSTACK_TESTS_RANDOM_MODELS_H_

#include <cmath>
#include <string>
#include <vector>

#include "fraudstack/common/random.h"
#include "fraudstack/gbdt/model.h"

namespace fraudstack::testing {

using gbdt::GbdtModel;
using gbdt::Node;
using gbdt::Tree;

inline Node split_node(int feature, double threshold, int left, int right, double cover) {
  Node n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  n.cover = cover;
  return n;
}

inline Node leaf_node(double value, double cover) {
  Node n;
  n.value = value;
  n.cover = cover;
  return n;
}

inline GbdtModel model_of(std::vector<Tree> trees, std::size_t n_features, double base = 0.0) {
  GbdtModel m;
  m.trees = std::move(trees);
  m.base_score = base;
  for (std::size_t f = 0; f < n_features; ++f) m.feature_names.push_back("f" + std::to_string(f));
  return m;
}

// Random tree with up to `max_leaves` leaves and consistent covers.
inline Tree random_tree(Rng& rng, std::size_t n_features, std::size_t max_leaves) {
  std::vector<Node> nodes = {leaf_node(0, 0)};
  std::vector<int> depth = {0};
  const std::size_t target = 1 + rng.below(max_leaves);
  std::size_t leaves = 1;
  while (leaves < target) {
    std::vector<int> open;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].is_leaf() && depth[i] < 5) open.push_back(static_cast<int>(i));
    }
    if (open.empty()) break;
    const int i = open[rng.below(open.size())];
    const int left = static_cast<int>(nodes.size());
    nodes[static_cast<std::size_t>(i)] =
        split_node(static_cast<int>(rng.below(n_features)), std::round(rng.uniform(-1, 1) * 8) / 8,
                   left, left + 1, 0);
    nodes.push_back(leaf_node(0, 0));
    nodes.push_back(leaf_node(0, 0));
    depth.push_back(depth[static_cast<std::size_t>(i)] + 1);
    depth.push_back(depth[static_cast<std::size_t>(i)] + 1);
    ++leaves;
  }
  for (std::size_t i = nodes.size(); i-- > 0;) {
    auto& n = nodes[i];
    if (n.is_leaf()) {
      n.value = rng.normal();
      n.cover = rng.uniform(0.5, 10.0);
    } else {
      n.cover = nodes[static_cast<std::size_t>(n.left)].cover +
                nodes[static_cast<std::size_t>(n.right)].cover;
    }
  }
  return Tree(std::move(nodes));
}

inline std::vector<double> random_row(Rng& rng, std::size_t d) {
  std::vector<double> x(d);
  for (auto& v : x) v = std::round(rng.uniform(-1.2, 1.2) * 8) / 8;
  return x;
}

}  // namespace fraudstack::testing

#endif  // FRAUDSTACK_TESTS_RANDOM_MODELS_H_
