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

#include "fraudstack/cli/run_config.h"

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::cli {
namespace {

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(fmt::format("{}: '{}' is not a boolean", key, value));
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  const auto v = parse_int(value, key);
  if (v < 0) throw Error(fmt::format("{} must be >= 0, got {}", key, v));
  return static_cast<std::size_t>(v);
}

}  // namespace

ThresholdPolicy ThresholdPolicy::parse(std::string_view text) {
  if (text == "f1") return {};
  if (text.starts_with("fixed:")) {
    const double v = parse_double(text.substr(6), "threshold");
    if (!(v > 0.0 && v < 1.0)) throw Error(fmt::format("fixed threshold must be in (0, 1), got {}", v));
    return {v};
  }
  throw Error(fmt::format("threshold policy '{}' must be f1 or fixed:<value>", text));
}

std::string ThresholdPolicy::to_string() const {
  return fixed ? fmt::format("fixed:{}", *fixed) : "f1";
}

RunConfig::RunConfig() {
  const auto defaults = stacking::StackingConfig::defaults();
  base = defaults.base;
  meta = defaults.meta;
  selector = base[0];
  // Raw features span very different scales, so neighbours are found on
  // standardized columns.
  smote.scale_features = true;
}

RunConfig RunConfig::from_kv(const KvConfig& kv) {
  RunConfig config;
  // Selector settings default to base1, so base1 keys are applied first.
  for (const auto& [key, value] : kv.values()) {
    if (key.starts_with("base1.")) config.set(key, value);
  }
  config.selector = config.base[0];
  for (const auto& [key, value] : kv.values()) {
    if (!key.starts_with("base1.")) config.set(key, value);
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    const std::string scope = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (scope == "base1" || scope == "base2" || scope == "base3" || scope == "meta" ||
        scope == "selector") {
      target_config(scope).set(field, value);
      return;
    }
    if (scope == "smote") {
      if (field == "enabled") {
        smote_enabled = parse_bool(key, value);
      } else if (field == "k") {
        smote.k_neighbors = static_cast<int>(parse_int(value, key));
      } else if (field == "ratio") {
        smote.target_ratio = parse_double(value, key);
      } else if (field == "scale_features") {
        smote.scale_features = parse_bool(key, value);
      } else {
        throw Error(fmt::format("unknown config key '{}'", key));
      }
      return;
    }
    if (scope == "tune") {
      if (field == "enabled") {
        tune_enabled = parse_bool(key, value);
      } else if (field == "trials") {
        tune_trials = static_cast<int>(parse_int(value, key));
      } else if (field == "folds") {
        tune_folds = static_cast<int>(parse_int(value, key));
      } else if (field == "strategy") {
        tune_strategy = tune::strategy_from_string(value);
      } else if (field == "target") {
        target_config(value);
        tune_target = value;
      } else {
        throw Error(fmt::format("unknown config key '{}'", key));
      }
      return;
    }
    if (scope == "baseline") {
      if (field == "tree_depth") {
        baseline_tree_depth = static_cast<int>(parse_int(value, key));
      } else if (field == "l2") {
        baseline_l2 = parse_double(value, key);
      } else if (field == "max_iters") {
        baseline_max_iters = static_cast<int>(parse_int(value, key));
      } else {
        throw Error(fmt::format("unknown config key '{}'", key));
      }
      return;
    }
    throw Error(fmt::format("unknown config key '{}'", key));
  }
  if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_int(value, key));
  } else if (key == "jobs") {
    jobs = static_cast<int>(parse_int(value, key));
  } else if (key == "out") {
    out = value;
  } else if (key == "data_dir") {
    data_dir = value;
  } else if (key == "transaction_file") {
    transaction_file = value;
  } else if (key == "identity_file") {
    identity_file = value;
  } else if (key == "schema_file") {
    schema_file = value;
  } else if (key == "test_fraction") {
    test_fraction = parse_double(value, key);
  } else if (key == "select_k") {
    select_k = parse_count(key, value);
  } else if (key == "shap_rows") {
    shap_rows = parse_count(key, value);
  } else if (key == "folds") {
    folds = static_cast<int>(parse_int(value, key));
  } else if (key == "naive_stacking") {
    naive_stacking = parse_bool(key, value);
  } else if (key == "smote_before_split") {
    smote_before_split = parse_bool(key, value);
  } else if (key == "threshold") {
    threshold = ThresholdPolicy::parse(value);
  } else if (key == "lime_samples") {
    lime_samples = parse_count(key, value);
  } else if (key == "lime_train_rows") {
    lime_train_rows = parse_count(key, value);
  } else if (key == "pdp_rows") {
    pdp_rows = parse_count(key, value);
  } else if (key == "pdp_grid") {
    pdp_grid = static_cast<int>(parse_int(value, key));
  } else if (key == "pfi_rows") {
    pfi_rows = parse_count(key, value);
  } else if (key == "pfi_repeats") {
    pfi_repeats = static_cast<int>(parse_int(value, key));
  } else {
    throw Error(fmt::format("unknown config key '{}'", key));
  }
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw Error("a seed is required: pass --seed or set 'seed' in the config file");
  return *seed;
}

std::filesystem::path RunConfig::resolve_input(const std::string& file) const {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : data_dir / p;
}

stacking::StackingConfig RunConfig::stacking_config(bool use_smote) const {
  stacking::StackingConfig config = stacking::StackingConfig::defaults();
  config.base = base;
  config.meta = meta;
  config.folds = folds;
  config.seed = require_seed();
  config.naive = naive_stacking;
  config.jobs = jobs;
  if (use_smote) {
    config.smote = smote;
    config.smote->seed = require_seed();
  }
  config.fixed_threshold = threshold.fixed;
  return config;
}

gbdt::GbdtConfig& RunConfig::target_config(const std::string& target) {
  if (target == "base1") return base[0];
  if (target == "base2") return base[1];
  if (target == "base3") return base[2];
  if (target == "meta") return meta;
  if (target == "selector") return selector;
  throw Error(fmt::format("unknown model slot '{}', expected base1, base2, base3 or meta", target));
}

}  // namespace fraudstack::cli
