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

#ifndef FRAUDSTACK_DATA_SCHEMA_H_
#define FRAUDSTACK_DATA_SCHEMA_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fraudstack/common/kv_config.h"

namespace fraudstack::data {

enum class ColumnKind { kNumeric, kCategorical, kKey, kTarget };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view text);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// Ordered column declarations. Names are unique; at most one key and at most
// one target column.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const ColumnSpec& operator[](std::size_t i) const { return columns_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  std::optional<std::size_t> target_index() const;
  std::optional<std::size_t> key_index() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<ColumnSpec> columns_;
};

// Column roles declared in the schema configuration document. Columns not
// listed as key, target or categorical are numeric.
struct SchemaConfig {
  std::string key_column;
  std::string target_column;
  std::set<std::string> categorical;
  std::vector<std::string> na_tokens = {"", "NaN", "NA"};

  // Reads `key_column`, `target_column`, `categorical` and `na_tokens`.
  static SchemaConfig from_kv(const KvConfig& config);

  // Builds the schema for a file with the given header.
  Schema resolve(const std::vector<std::string>& header) const;
};

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_SCHEMA_H_
