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

#ifndef FRAUDSTACK_GBDT_MODEL_H_
#define FRAUDSTACK_GBDT_MODEL_H_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fraudstack/common/matrix.h"
#include "fraudstack/gbdt/config.h"

namespace fraudstack::gbdt {

inline double sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

// A tree node. Internal nodes send x to `left` when x[feature] < threshold
// (NaN goes right). Leaves carry an additive log-odds value. `cover` is the
// training hessian mass reaching the node.
struct Node {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const Node&, const Node&) = default;
};

// Flat node array; node 0 is the root and children follow their parent.
class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<Node> nodes);

  static Tree leaf(double value, double cover);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  int depth() const;

  int leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return node(leaf_index(x)).value; }

  // Cover-weighted mean leaf value.
  double expected_value() const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<Node> nodes_;
};

struct GbdtModel {
  std::vector<Tree> trees;
  double base_score = 0.0;
  GbdtConfig config;
  std::vector<std::string> feature_names;

  std::size_t n_features() const { return feature_names.size(); }

  // base_score plus the leaf value of every tree, summed in tree order.
  double predict_margin(std::span<const double> x) const;
  double predict_proba(std::span<const double> x) const {
    return sigmoid(predict_margin(x));
  }
  std::vector<double> predict_margin(const Matrix& x) const;
  std::vector<double> predict_proba(const Matrix& x) const;

  // True when some split in some tree tests `feature`.
  bool uses_feature(std::size_t feature) const;
};

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_MODEL_H_
