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

#ifndef FRAUDSTACK_GBDT_SERIALIZE_H_
#define FRAUDSTACK_GBDT_SERIALIZE_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "fraudstack/gbdt/model.h"

namespace fraudstack::gbdt {

inline constexpr int kModelFormatVersion = 1;

// Document layout:
//   {"format_version": 1, "kind": "gbdt", "base_score": .., "growth": ..,
//    "feature_names": [..], "config": {..},
//    "trees": [{"feature", "threshold", "cover", "left": {..}, "right": {..}}
//              | {"value", "cover"}]}
// Doubles are written in shortest round-trip form, so a reloaded model
// predicts bit-for-bit the same margins.
nlohmann::json to_json(const GbdtModel& model);
GbdtModel from_json(const nlohmann::json& doc);

void save_model(const GbdtModel& model, const std::filesystem::path& path);
GbdtModel load_model(const std::filesystem::path& path);

}  // namespace fraudstack::gbdt

#endif  // FRAUDSTACK_GBDT_SERIALIZE_H_
