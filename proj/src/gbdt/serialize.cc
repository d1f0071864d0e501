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

#include "fraudstack/gbdt/serialize.h"

#include <fstream>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::gbdt {
namespace {

nlohmann::json node_to_json(const Tree& tree, int id) {
  const Node& n = tree.node(id);
  if (n.is_leaf()) return {{"value", n.value}, {"cover", n.cover}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"cover", n.cover},
          {"left", node_to_json(tree, n.left)},
          {"right", node_to_json(tree, n.right)}};
}

// Appends the subtree rooted at `doc` in pre-order and returns its index.
int node_from_json(const nlohmann::json& doc, std::vector<Node>& nodes) {
  if (!doc.is_object() || !doc.contains("cover")) {
    throw Error("malformed tree node: missing 'cover'");
  }
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  Node node;
  node.cover = doc.at("cover").get<double>();
  if (doc.contains("value")) {
    node.value = doc.at("value").get<double>();
  } else {
    if (!doc.contains("feature") || !doc.contains("threshold") || !doc.contains("left") ||
        !doc.contains("right")) {
      throw Error("malformed tree node: internal node needs feature, threshold, left, right");
    }
    node.feature = doc.at("feature").get<int>();
    node.threshold = doc.at("threshold").get<double>();
    if (node.feature < 0) throw Error("malformed tree node: negative feature index");
    node.left = node_from_json(doc.at("left"), nodes);
    node.right = node_from_json(doc.at("right"), nodes);
  }
  nodes[static_cast<std::size_t>(id)] = node;
  return id;
}

}  // namespace

nlohmann::json to_json(const GbdtModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : model.trees) trees.push_back(node_to_json(tree, 0));
  return {{"format_version", kModelFormatVersion},
          {"kind", "gbdt"},
          {"base_score", model.base_score},
          {"growth", to_string(model.config.growth)},
          {"feature_names", model.feature_names},
          {"config", model.config.to_json()},
          {"trees", std::move(trees)}};
}

GbdtModel from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("format_version")) {
      throw Error("model document has no format_version");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(fmt::format("unsupported model format_version {}", version));
    }
    if (doc.value("kind", std::string("gbdt")) != "gbdt") {
      throw Error("document is not a gbdt model");
    }
    GbdtModel model;
    if (doc.contains("config")) model.config = GbdtConfig::from_json(doc.at("config"));
    model.config.growth = growth_from_string(doc.at("growth").get<std::string>());
    model.base_score = doc.at("base_score").get<double>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& tree_doc : doc.at("trees")) {
      std::vector<Node> nodes;
      node_from_json(tree_doc, nodes);
      for (const Node& n : nodes) {
        if (!n.is_leaf() && static_cast<std::size_t>(n.feature) >= model.feature_names.size()) {
          throw Error("tree references a feature outside feature_names");
        }
      }
      model.trees.emplace_back(std::move(nodes));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("malformed model document: {}", e.what()));
  }
}

void save_model(const GbdtModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << to_json(model).dump(1) << '\n';
}

GbdtModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return from_json(doc);
}

}  // namespace fraudstack::gbdt
