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

#include "fraudstack/data/preprocess.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"

namespace fraudstack::data {
namespace {

std::string key_text(const Column& column, std::size_t row) {
  if (column.is_text()) return column.strings()[row];
  return fmt::format("{}", column.numbers()[row]);
}

Column impute_column(const Column& column, ColumnKind kind) {
  const std::size_t n = column.size();
  if (column.is_text()) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
      if (!column.is_missing(i)) ++counts[column.strings()[i]];
    }
    std::string fill(kAllMissingCategory);
    std::size_t best = 0;
    for (const auto& [value, count] : counts) {
      if (count > best) {
        best = count;
        fill = value;
      }
    }
    std::vector<std::string> values = column.strings();
    for (std::size_t i = 0; i < n; ++i) {
      if (column.is_missing(i)) values[i] = fill;
    }
    return Column::text(std::move(values), std::vector<std::uint8_t>(n, 0));
  }

  std::vector<double> present;
  present.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!column.is_missing(i)) present.push_back(column.numbers()[i]);
  }
  double fill = 0.0;
  if (!present.empty()) {
    std::sort(present.begin(), present.end());
    if (kind == ColumnKind::kCategorical) {
      // Encoded categorical: modal code, smallest on ties.
      std::size_t best = 0;
      for (std::size_t i = 0; i < present.size();) {
        std::size_t j = i;
        while (j < present.size() && present[j] == present[i]) ++j;
        if (j - i > best) {
          best = j - i;
          fill = present[i];
        }
        i = j;
      }
    } else {
      fill = present[(present.size() - 1) / 2];
    }
  }
  std::vector<double> values = column.numbers();
  for (std::size_t i = 0; i < n; ++i) {
    if (column.is_missing(i)) values[i] = fill;
  }
  return Column::numeric(std::move(values));
}

}  // namespace

Table left_join(const Table& left, const Table& right, std::string_view key) {
  const auto left_key = left.schema().find(key);
  const auto right_key = right.schema().find(key);
  if (!left_key || !right_key) {
    throw Error(fmt::format("join key '{}' is absent from the {} table", key,
                            left_key ? "right" : "left"));
  }

  std::unordered_map<std::string, std::size_t> right_rows;
  const Column& rk = right.column(*right_key);
  for (std::size_t r = 0; r < right.n_rows(); ++r) {
    if (rk.is_missing(r)) continue;
    if (!right_rows.emplace(key_text(rk, r), r).second) {
      throw Error(fmt::format("duplicate join key '{}' in right table", key_text(rk, r)));
    }
  }

  // kNoMatch selects an all-missing slot.
  constexpr std::size_t kNoMatch = std::numeric_limits<std::size_t>::max();
  const Column& lk = left.column(*left_key);
  std::vector<std::size_t> match(left.n_rows(), kNoMatch);
  for (std::size_t r = 0; r < left.n_rows(); ++r) {
    if (lk.is_missing(r)) continue;
    auto it = right_rows.find(key_text(lk, r));
    if (it != right_rows.end()) match[r] = it->second;
  }

  std::vector<ColumnSpec> specs = left.schema().columns();
  std::vector<Column> columns = left.columns();
  for (std::size_t c = 0; c < right.n_columns(); ++c) {
    if (c == *right_key) continue;
    const ColumnSpec& spec = right.schema()[c];
    const Column& source = right.column(c);
    const std::size_t n = left.n_rows();
    std::vector<std::uint8_t> missing(n, 1);
    if (source.is_text()) {
      std::vector<std::string> values(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (match[r] == kNoMatch) continue;
        values[r] = source.strings()[match[r]];
        missing[r] = source.missing()[match[r]];
      }
      columns.push_back(Column::text(std::move(values), std::move(missing)));
    } else {
      std::vector<double> values(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        if (match[r] == kNoMatch) continue;
        values[r] = source.numbers()[match[r]];
        missing[r] = source.missing()[match[r]];
      }
      columns.push_back(Column::numeric(std::move(values), std::move(missing)));
    }
    specs.push_back(spec);
  }
  return Table(Schema(std::move(specs)), std::move(columns), left.n_rows());
}

Table drop_columns(const Table& table, std::span<const std::string> names) {
  std::unordered_set<std::string> drop;
  for (const auto& name : names) {
    if (!table.schema().find(name)) {
      throw Error(fmt::format("cannot drop unknown column '{}'", name));
    }
    drop.insert(name);
  }
  std::vector<ColumnSpec> specs;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    if (drop.contains(table.schema()[c].name)) continue;
    specs.push_back(table.schema()[c]);
    columns.push_back(table.column(c));
  }
  return Table(Schema(std::move(specs)), std::move(columns), table.n_rows());
}

Table impute(const Table& table) {
  std::vector<Column> columns;
  columns.reserve(table.n_columns());
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    const ColumnKind kind = table.schema()[c].kind;
    if (kind == ColumnKind::kKey || kind == ColumnKind::kTarget) {
      columns.push_back(table.column(c));
    } else {
      columns.push_back(impute_column(table.column(c), kind));
    }
  }
  return Table(table.schema(), std::move(columns), table.n_rows());
}

void EncodingMap::add_column(const std::string& column,
                             std::vector<std::string> categories) {
  Codes codes;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (!codes.lookup.emplace(categories[i], static_cast<std::int64_t>(i)).second) {
      throw Error(fmt::format("category '{}' listed twice for column '{}'",
                              categories[i], column));
    }
  }
  codes.categories = std::move(categories);
  columns_[column] = std::move(codes);
}

bool EncodingMap::has_column(std::string_view column) const {
  return columns_.find(column) != columns_.end();
}

const EncodingMap::Codes& EncodingMap::codes(std::string_view column) const {
  auto it = columns_.find(column);
  if (it == columns_.end()) {
    throw Error(fmt::format("no encoding for column '{}'", column));
  }
  return it->second;
}

std::int64_t EncodingMap::encode(std::string_view column,
                                 const std::string& category) const {
  const Codes& c = codes(column);
  auto it = c.lookup.find(category);
  return it == c.lookup.end() ? static_cast<std::int64_t>(c.categories.size()) : it->second;
}

std::int64_t EncodingMap::unseen_code(std::string_view column) const {
  return static_cast<std::int64_t>(codes(column).categories.size());
}

const std::string& EncodingMap::decode(std::string_view column, std::int64_t code) const {
  const Codes& c = codes(column);
  if (code < 0 || code >= static_cast<std::int64_t>(c.categories.size())) {
    throw Error(fmt::format("code {} has no category in column '{}'", code, column));
  }
  return c.categories[static_cast<std::size_t>(code)];
}

Table EncodingMap::apply(const Table& table) const {
  std::vector<Column> columns;
  columns.reserve(table.n_columns());
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    const ColumnSpec& spec = table.schema()[c];
    const Column& source = table.column(c);
    if (spec.kind != ColumnKind::kCategorical || !source.is_text()) {
      columns.push_back(source);
      continue;
    }
    std::vector<double> values(source.size(), 0.0);
    for (std::size_t r = 0; r < source.size(); ++r) {
      if (!source.is_missing(r)) {
        values[r] = static_cast<double>(encode(spec.name, source.strings()[r]));
      }
    }
    columns.push_back(Column::numeric(std::move(values), source.missing()));
  }
  return Table(table.schema(), std::move(columns), table.n_rows());
}

nlohmann::json EncodingMap::to_json() const {
  nlohmann::json columns = nlohmann::json::object();
  for (const auto& [name, codes] : columns_) columns[name] = codes.categories;
  return {{"format_version", 1}, {"columns", columns}};
}

EncodingMap EncodingMap::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format_version", -1) != 1) {
    throw Error("unsupported encoding map document");
  }
  EncodingMap map;
  for (const auto& [name, categories] : doc.at("columns").items()) {
    map.add_column(name, categories.get<std::vector<std::string>>());
  }
  return map;
}

std::pair<Table, EncodingMap> label_encode(const Table& table) {
  EncodingMap map;
  for (std::size_t c = 0; c < table.n_columns(); ++c) {
    const ColumnSpec& spec = table.schema()[c];
    const Column& source = table.column(c);
    if (spec.kind != ColumnKind::kCategorical || !source.is_text()) continue;
    std::vector<std::string> categories;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 0; r < source.size(); ++r) {
      if (source.is_missing(r)) continue;
      if (seen.insert(source.strings()[r]).second) {
        categories.push_back(source.strings()[r]);
      }
    }
    map.add_column(spec.name, std::move(categories));
  }
  Table encoded = map.apply(table);
  return {std::move(encoded), std::move(map)};
}

SplitIndices stratified_split_indices(std::span<const int> labels,
                                      double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(fmt::format("test fraction {} is outside (0, 1)", test_fraction));
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  if (by_class.size() < 2) throw Error("stratified split needs at least two classes");

  struct Quota {
    int label;
    std::size_t count;
    std::size_t test;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (const auto& [label, rows] : by_class) {
    const double exact = static_cast<double>(rows.size()) * test_fraction;
    const auto base = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({label, rows.size(), base, exact - static_cast<double>(base)});
    assigned += base;
  }
  const auto total =
      static_cast<std::size_t>(std::llround(static_cast<double>(labels.size()) * test_fraction));
  std::vector<std::size_t> order(quotas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].remainder > quotas[b].remainder;
  });
  for (std::size_t k = 0; assigned < total && k < order.size(); ++k) {
    Quota& q = quotas[order[k]];
    if (q.test < q.count) {
      ++q.test;
      ++assigned;
    }
  }

  Rng rng(seed);
  SplitIndices out;
  for (const Quota& q : quotas) {
    if (q.count >= 2 && (q.test == 0 || q.test == q.count)) {
      throw Error(fmt::format(
          "class {} ({} rows) would be absent from the {} side of the split",
          q.label, q.count, q.test == 0 ? "test" : "train"));
    }
    std::vector<std::size_t> rows = by_class[q.label];
    rng.shuffle(rows);
    out.test.insert(out.test.end(), rows.begin(), rows.begin() + q.test);
    out.train.insert(out.train.end(), rows.begin() + q.test, rows.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Table, Table> stratified_split(const Table& table, double test_fraction,
                                         std::uint64_t seed) {
  const std::vector<int> labels = table.labels();
  const SplitIndices split = stratified_split_indices(labels, test_fraction, seed);
  return {table.select_rows(split.train), table.select_rows(split.test)};
}

}  // namespace fraudstack::data
