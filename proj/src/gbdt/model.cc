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

#include "fraudstack/gbdt/model.h"

#include <algorithm>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::gbdt {

Tree::Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("a tree needs at least one node");
  const int n = static_cast<int>(nodes_.size());
  for (int i = 0; i < n; ++i) {
    const Node& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      throw Error(fmt::format("tree node {} has invalid children", i));
    }
  }
}

Tree Tree::leaf(double value, double cover) {
  Node node;
  node.value = value;
  node.cover = cover;
  return Tree({node});
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

int Tree::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    deepest = std::max(deepest, depth[i]);
    if (n.is_leaf()) continue;
    depth[static_cast<std::size_t>(n.left)] = depth[i] + 1;
    depth[static_cast<std::size_t>(n.right)] = depth[i] + 1;
  }
  return deepest;
}

int Tree::leaf_index(std::span<const double> x) const {
  int i = 0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  return i;
}

double Tree::expected_value() const {
  // Children always have larger indices, so one forward pass propagates the
  // probability of reaching each node.
  std::vector<double> reach(nodes_.size(), 0.0);
  reach[0] = 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      total += reach[i] * n.value;
      continue;
    }
    const double left = nodes_[static_cast<std::size_t>(n.left)].cover;
    const double right = nodes_[static_cast<std::size_t>(n.right)].cover;
    reach[static_cast<std::size_t>(n.left)] = reach[i] * left / (left + right);
    reach[static_cast<std::size_t>(n.right)] = reach[i] * right / (left + right);
  }
  return total;
}

double GbdtModel::predict_margin(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw Error(fmt::format("row has {} features, model expects {}", x.size(), n_features()));
  }
  double margin = base_score;
  for (const Tree& tree : trees) margin += tree.predict(x);
  return margin;
}

std::vector<double> GbdtModel::predict_margin(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_margin(x.row(r));
  return out;
}

std::vector<double> GbdtModel::predict_proba(const Matrix& x) const {
  std::vector<double> out = predict_margin(x);
  for (double& v : out) v = sigmoid(v);
  return out;
}

bool GbdtModel::uses_feature(std::size_t feature) const {
  for (const Tree& tree : trees) {
    for (const Node& n : tree.nodes()) {
      if (!n.is_leaf() && static_cast<std::size_t>(n.feature) == feature) return true;
    }
  }
  return false;
}

}  // namespace fraudstack::gbdt
