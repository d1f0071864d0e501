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

#include "fraudstack/data/container.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fraudstack/common/error.h"

namespace fraudstack::data {
namespace {

constexpr std::array<char, 8> kMagic = {'F', 'S', 'T', 'A', 'B', 'L', 'E', '\0'};

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const unsigned char* bytes) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void write_container(const std::filesystem::path& path, const Table& table) {
  nlohmann::json header;
  header["n_rows"] = table.n_rows();
  header["columns"] = nlohmann::json::array();
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    if (table.column(c).is_text()) {
      throw Error(fmt::format("column '{}' must be encoded before writing",
                              table.schema()[c].name));
    }
    header["columns"].push_back(
        {{"name", table.schema()[c].name}, {"kind", to_string(table.schema()[c].kind)}});
  }
  const std::string header_text = header.dump();

  std::string bytes(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(bytes, kContainerVersion);
  put_le<std::uint64_t>(bytes, header_text.size());
  bytes += header_text;
  bytes.reserve(bytes.size() + table.n_columns() * table.n_rows() * 8);
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    const Column& column = table.column(c);
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
      const double v = column.is_missing(r) ? std::nan("") : column.numbers()[r];
      put_le<std::uint64_t>(bytes, std::bit_cast<std::uint64_t>(v));
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(fmt::format("short write to '{}'", path.string()));
}

Table read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(fmt::format("'{}' is not a prepared-data file", path.string()));
  }
  const auto version = get_le<std::uint32_t>(data + 8);
  if (version != kContainerVersion) {
    throw Error(fmt::format("'{}' has container version {}, expected {}", path.string(),
                            version, kContainerVersion));
  }
  const auto header_size = get_le<std::uint64_t>(data + 12);
  if (20 + header_size > bytes.size()) {
    throw Error(fmt::format("'{}' is truncated", path.string()));
  }
  const auto header = nlohmann::json::parse(bytes.substr(20, header_size));
  const std::size_t n_rows = header.at("n_rows").get<std::size_t>();
  std::vector<ColumnSpec> specs;
  for (const auto& c : header.at("columns")) {
    specs.push_back({c.at("name").get<std::string>(),
                     column_kind_from_string(c.at("kind").get<std::string>())});
  }
  const std::size_t expected = 20 + header_size + specs.size() * n_rows * 8;
  if (bytes.size() != expected) {
    throw Error(fmt::format("'{}' has {} bytes, expected {}", path.string(),
                            bytes.size(), expected));
  }
  std::vector<Column> columns;
  const unsigned char* cursor = data + 20 + header_size;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    std::vector<double> values(n_rows);
    std::vector<std::uint8_t> missing(n_rows, 0);
    for (std::size_t r = 0; r < n_rows; ++r, cursor += 8) {
      values[r] = std::bit_cast<double>(get_le<std::uint64_t>(cursor));
      missing[r] = std::isnan(values[r]) ? 1 : 0;
    }
    columns.push_back(Column::numeric(std::move(values), std::move(missing)));
  }
  return Table(Schema(std::move(specs)), std::move(columns), n_rows);
}

}  // namespace fraudstack::data
