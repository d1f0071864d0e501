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

#include "fraudstack/data/schema.h"

#include <unordered_set>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack::data {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kNumeric:
      return "numeric";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kKey:
      return "key";
    case ColumnKind::kTarget:
      return "target";
  }
  return "numeric";
}

ColumnKind column_kind_from_string(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  if (text == "key") return ColumnKind::kKey;
  if (text == "target") return ColumnKind::kTarget;
  throw Error(fmt::format("unknown column kind '{}'", text));
}

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string> seen;
  int keys = 0;
  int targets = 0;
  for (const auto& column : columns_) {
    if (!seen.insert(column.name).second) {
      throw Error(fmt::format("duplicate column name '{}'", column.name));
    }
    keys += column.kind == ColumnKind::kKey;
    targets += column.kind == ColumnKind::kTarget;
  }
  if (keys > 1) throw Error("schema declares more than one key column");
  if (targets > 1) throw Error("schema declares more than one target column");
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error(fmt::format("unknown column '{}'", name));
  return *i;
}

std::optional<std::size_t> Schema::target_index() const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].kind == ColumnKind::kTarget) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Schema::key_index() const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].kind == ColumnKind::kKey) return i;
  }
  return std::nullopt;
}

SchemaConfig SchemaConfig::from_kv(const KvConfig& config) {
  SchemaConfig out;
  out.key_column = config.get_string("key_column", "");
  out.target_column = config.get_string("target_column", "");
  for (auto& name : config.get_list("categorical")) out.categorical.insert(name);
  if (config.contains("na_tokens")) out.na_tokens = config.get_list("na_tokens");
  return out;
}

Schema SchemaConfig::resolve(const std::vector<std::string>& header) const {
  std::vector<ColumnSpec> columns;
  columns.reserve(header.size());
  for (const auto& name : header) {
    ColumnKind kind = ColumnKind::kNumeric;
    if (!key_column.empty() && name == key_column) {
      kind = ColumnKind::kKey;
    } else if (!target_column.empty() && name == target_column) {
      kind = ColumnKind::kTarget;
    } else if (categorical.contains(name)) {
      kind = ColumnKind::kCategorical;
    }
    columns.push_back({name, kind});
  }
  return Schema(std::move(columns));
}

}  // namespace fraudstack::data
