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

#include "fraudstack/common/kv_config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fraudstack/common/error.h"

namespace fraudstack {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::string current;
  bool quoted = false;
  for (char c : text) {
    if (c == '"') {
      quoted = !quoted;
      current.push_back(c);
    } else if (c == ',' && !quoted) {
      out.push_back(unquote(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(unquote(current));
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(fmt::format("{}: '{}' is not a number", what, s));
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  const std::string_view s = trim(text);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(fmt::format("{}: '{}' is not an integer", what, s));
  }
  return v;
}

KvConfig KvConfig::parse(std::string_view text) {
  KvConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const std::string key(trim(view.substr(0, eq)));
    if (key.empty()) {
      throw Error(fmt::format("config line {}: empty key", line_no));
    }
    config.values_[key] = std::string(trim(view.substr(eq + 1)));
  }
  return config;
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return unquote(it->second);
}

std::string KvConfig::get_string(const std::string& key,
                                 std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::int64_t KvConfig::get_int(const std::string& key,
                               std::int64_t fallback) const {
  auto v = get(key);
  return v ? parse_int(*v, key) : fallback;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::string lower = *v;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  throw Error(fmt::format("{}: '{}' is not a boolean", key, *v));
}

std::vector<std::string> KvConfig::get_list(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  return split_list(it->second);
}

std::map<std::string, std::string> KvConfig::with_prefix(
    std::string_view prefix) const {
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : values_) {
    if (key.starts_with(prefix)) out[key.substr(prefix.size())] = unquote(value);
  }
  return out;
}

}  // namespace fraudstack
