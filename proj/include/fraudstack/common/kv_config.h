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

#ifndef FRAUDSTACK_COMMON_KV_CONFIG_H_
#define FRAUDSTACK_COMMON_KV_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraudstack {

// Plain-text configuration document:
//
//   # comment
//   key = value
//   list_key = a, b, "c, d", ""
//
// Values are kept as raw text; list values split on commas outside double
// quotes. Later keys override earlier ones.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig parse(std::string_view text);
  static KvConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
  }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;

  // Keys starting with `prefix`, with the prefix stripped.
  std::map<std::string, std::string> with_prefix(std::string_view prefix) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(std::string_view text);
double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);

}  // namespace fraudstack

#endif  // FRAUDSTACK_COMMON_KV_CONFIG_H_
