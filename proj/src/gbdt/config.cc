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

#include "fraudstack/gbdt/config.h"

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/kv_config.h"

namespace fraudstack::gbdt {

std::string_view to_string(Growth growth) {
  switch (growth) {
    case Growth::kDepthWise:
      return "depth_wise";
    case Growth::kLeafWise:
      return "leaf_wise";
    case Growth::kSymmetric:
      return "symmetric";
  }
  return "depth_wise";
}

Growth growth_from_string(std::string_view text) {
  if (text == "depth_wise") return Growth::kDepthWise;
  if (text == "leaf_wise") return Growth::kLeafWise;
  if (text == "symmetric") return Growth::kSymmetric;
  throw Error(fmt::format("unknown growth strategy '{}'", text));
}

void GbdtConfig::validate() const {
  auto fail = [](std::string_view what) { throw Error(fmt::format("GBDT config: {}", what)); };
  if (n_estimators < 0) fail("n_estimators must be >= 0");
  if (max_depth < 0) fail("max_depth must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) fail("learning_rate must be in (0, 1]");
  if (!(subsample > 0.0 && subsample <= 1.0)) fail("subsample must be in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    fail("colsample_bytree must be in (0, 1]");
  }
  if (!(scale_pos_weight >= 0.0)) fail("scale_pos_weight must be >= 0");
  if (max_leaves < 2) fail("max_leaves must be >= 2");
  if (!(lambda >= 0.0)) fail("lambda must be >= 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (n_bins < 2 || n_bins > 65536) fail("n_bins must be in [2, 65536]");
  if (!(min_child_weight >= 0.0)) fail("min_child_weight must be >= 0");
}

void GbdtConfig::set(std::string_view name, std::string_view value) {
  const std::string key(name);
  if (name == "n_estimators") {
    n_estimators = static_cast<int>(parse_int(value, key));
  } else if (name == "max_depth") {
    max_depth = static_cast<int>(parse_int(value, key));
  } else if (name == "learning_rate") {
    learning_rate = parse_double(value, key);
  } else if (name == "subsample") {
    subsample = parse_double(value, key);
  } else if (name == "colsample_bytree") {
    colsample_bytree = parse_double(value, key);
  } else if (name == "scale_pos_weight") {
    scale_pos_weight = parse_double(value, key);
  } else if (name == "growth") {
    growth = growth_from_string(value);
  } else if (name == "max_leaves") {
    max_leaves = static_cast<int>(parse_int(value, key));
  } else if (name == "lambda") {
    lambda = parse_double(value, key);
  } else if (name == "gamma") {
    gamma = parse_double(value, key);
  } else if (name == "n_bins") {
    n_bins = static_cast<int>(parse_int(value, key));
  } else if (name == "min_child_weight") {
    min_child_weight = parse_double(value, key);
  } else if (name == "seed") {
    seed = static_cast<std::uint64_t>(parse_int(value, key));
  } else {
    throw Error(fmt::format("unknown GBDT parameter '{}'", name));
  }
}

nlohmann::json GbdtConfig::to_json() const {
  return {{"n_estimators", n_estimators},
          {"max_depth", max_depth},
          {"learning_rate", learning_rate},
          {"subsample", subsample},
          {"colsample_bytree", colsample_bytree},
          {"scale_pos_weight", scale_pos_weight},
          {"growth", to_string(growth)},
          {"max_leaves", max_leaves},
          {"lambda", lambda},
          {"gamma", gamma},
          {"n_bins", n_bins},
          {"min_child_weight", min_child_weight},
          {"seed", seed}};
}

GbdtConfig GbdtConfig::from_json(const nlohmann::json& doc) {
  GbdtConfig c;
  c.n_estimators = doc.value("n_estimators", c.n_estimators);
  c.max_depth = doc.value("max_depth", c.max_depth);
  c.learning_rate = doc.value("learning_rate", c.learning_rate);
  c.subsample = doc.value("subsample", c.subsample);
  c.colsample_bytree = doc.value("colsample_bytree", c.colsample_bytree);
  c.scale_pos_weight = doc.value("scale_pos_weight", c.scale_pos_weight);
  if (doc.contains("growth")) c.growth = growth_from_string(doc["growth"].get<std::string>());
  c.max_leaves = doc.value("max_leaves", c.max_leaves);
  c.lambda = doc.value("lambda", c.lambda);
  c.gamma = doc.value("gamma", c.gamma);
  c.n_bins = doc.value("n_bins", c.n_bins);
  c.min_child_weight = doc.value("min_child_weight", c.min_child_weight);
  c.seed = doc.value("seed", c.seed);
  return c;
}

}  // namespace fraudstack::gbdt
