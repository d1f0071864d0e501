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

#include "fraudstack/data/synthetic.h"

#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/random.h"
#include "fraudstack/data/csv.h"

namespace fraudstack::data {
namespace {

struct Choice {
  const char* value;
  double weight;
};

std::string pick(Rng& rng, std::span<const Choice> choices) {
  double total = 0.0;
  for (const auto& c : choices) total += c.weight;
  double u = rng.uniform() * total;
  for (const auto& c : choices) {
    if (u < c.weight) return c.value;
    u -= c.weight;
  }
  return choices.back().value;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

// Column builder that tracks the missing mask alongside the values.
struct NumericBuilder {
  std::string name;
  std::vector<double> values{};
  std::vector<std::uint8_t> missing{};
  void push(double v) {
    values.push_back(v);
    missing.push_back(0);
  }
  void push_missing() {
    values.push_back(0.0);
    missing.push_back(1);
  }
};

struct TextBuilder {
  std::string name;
  std::vector<std::string> values{};
  std::vector<std::uint8_t> missing{};
  void push(std::string v) {
    values.push_back(std::move(v));
    missing.push_back(0);
  }
  void push_missing() {
    values.emplace_back();
    missing.push_back(1);
  }
};

constexpr int kCountColumns = 14;
constexpr int kTimedeltaColumns = 4;
constexpr int kVestaColumns = 20;

}  // namespace

SyntheticTables generate_synthetic(const SyntheticOptions& options) {
  if (options.n_rows < 2) throw Error("synthetic data needs at least two rows");
  if (!(options.positive_rate > 0.0 && options.positive_rate < 1.0)) {
    throw Error("positive rate must lie in (0, 1)");
  }
  const std::size_t n = options.n_rows;
  Rng rng(options.seed);

  const auto n_pos = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * options.positive_rate)));
  std::vector<int> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_pos), 1);
  rng.shuffle(labels);

  NumericBuilder id{"TransactionID"}, target{"isFraud"}, dt{"TransactionDT"},
      amount{"TransactionAmt"}, card1{"card1"}, addr1{"addr1"};
  TextBuilder product{"ProductCD"}, card4{"card4"}, card6{"card6"}, email{"P_emaildomain"};
  std::vector<NumericBuilder> counts(kCountColumns), deltas(kTimedeltaColumns),
      vesta(kVestaColumns);
  for (int j = 0; j < kCountColumns; ++j) counts[j].name = fmt::format("C{}", j + 1);
  for (int j = 0; j < kTimedeltaColumns; ++j) deltas[j].name = fmt::format("D{}", j + 1);
  for (int j = 0; j < kVestaColumns; ++j) vesta[j].name = fmt::format("V{}", j + 1);

  static constexpr Choice kProductNeg[] = {{"W", 0.75}, {"C", 0.10}, {"R", 0.07}, {"H", 0.05}, {"S", 0.03}};
  static constexpr Choice kProductPos[] = {{"W", 0.50}, {"C", 0.30}, {"R", 0.08}, {"H", 0.08}, {"S", 0.04}};
  static constexpr Choice kCard4[] = {{"visa", 0.65}, {"mastercard", 0.30}, {"american express", 0.03}, {"discover", 0.02}};
  static constexpr Choice kCard6Neg[] = {{"debit", 0.76}, {"credit", 0.24}};
  static constexpr Choice kCard6Pos[] = {{"debit", 0.55}, {"credit", 0.45}};
  static constexpr Choice kEmailNeg[] = {{"gmail.com", 0.45}, {"yahoo.com", 0.18}, {"hotmail.com", 0.10},
                                         {"anonymous.com", 0.12}, {"aol.com", 0.07}, {"outlook.com", 0.08}};
  static constexpr Choice kEmailPos[] = {{"gmail.com", 0.45}, {"yahoo.com", 0.10}, {"hotmail.com", 0.18},
                                         {"anonymous.com", 0.10}, {"aol.com", 0.05}, {"outlook.com", 0.12}};

  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    id.push(static_cast<double>(2987000 + i));
    target.push(y);
    dt.push(static_cast<double>(86400 + 37 * i + rng.below(30)));
    amount.push(round_to(std::exp((y ? 4.0 : 4.3) + rng.normal()), 0.01));
    product.push(pick(rng, y ? std::span<const Choice>(kProductPos) : std::span<const Choice>(kProductNeg)));
    card1.push(static_cast<double>(1000 + rng.below(17000)));
    if (rng.uniform() < 0.02) {
      card4.push_missing();
    } else {
      card4.push(pick(rng, kCard4));
    }
    card6.push(pick(rng, y ? std::span<const Choice>(kCard6Pos) : std::span<const Choice>(kCard6Neg)));
    if (rng.uniform() < 0.11) {
      addr1.push_missing();
    } else {
      addr1.push(static_cast<double>(100 + rng.below(440)));
    }
    if (rng.uniform() < 0.15) {
      email.push_missing();
    } else {
      email.push(pick(rng, y ? std::span<const Choice>(kEmailPos) : std::span<const Choice>(kEmailNeg)));
    }
    for (int j = 0; j < kCountColumns; ++j) {
      // C1, C13 and C14 run higher for fraud.
      const bool informative = y && (j == 0 || j == 12 || j == 13);
      counts[j].push(std::floor(std::exp(0.9 * rng.normal() + (informative ? 0.5 : 0.0))));
    }
    for (int j = 0; j < kTimedeltaColumns; ++j) {
      if (rng.uniform() < 0.05 + 0.1 * j) {
        deltas[j].push_missing();
      } else if (j == 0 && y && rng.uniform() < 0.4) {
        deltas[j].push(static_cast<double>(rng.below(30)));
      } else {
        deltas[j].push(static_cast<double>(rng.below(640)));
      }
    }
    // Legitimate rows form one cloud in (V12, V13); fraud rows sit in two
    // clusters on opposite sides of it.
    double v12 = rng.normal();
    double v13 = rng.normal();
    if (y) {
      const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
      v12 = side * 2.4 + 0.6 * v12;
      v13 = side * 2.4 + 0.6 * v13;
    }
    for (int j = 0; j < kVestaColumns; ++j) {
      double v = rng.normal();
      if (j == 11) v = v12;
      if (j == 12) v = v13;
      vesta[j].push(round_to(v, 1e-4));
    }
  }

  std::vector<ColumnSpec> specs;
  std::vector<Column> columns;
  auto add_numeric = [&](NumericBuilder& b, ColumnKind kind) {
    specs.push_back({b.name, kind});
    columns.push_back(Column::numeric(std::move(b.values), std::move(b.missing)));
  };
  auto add_text = [&](TextBuilder& b, ColumnKind kind) {
    specs.push_back({b.name, kind});
    columns.push_back(Column::text(std::move(b.values), std::move(b.missing)));
  };
  // Keys are read back as text, so they are stored that way here too.
  {
    TextBuilder key{"TransactionID"};
    for (double v : id.values) key.push(fmt::format("{}", v));
    add_text(key, ColumnKind::kKey);
  }
  add_numeric(target, ColumnKind::kTarget);
  add_numeric(dt, ColumnKind::kNumeric);
  add_numeric(amount, ColumnKind::kNumeric);
  add_text(product, ColumnKind::kCategorical);
  add_numeric(card1, ColumnKind::kNumeric);
  add_text(card4, ColumnKind::kCategorical);
  add_text(card6, ColumnKind::kCategorical);
  add_numeric(addr1, ColumnKind::kNumeric);
  add_text(email, ColumnKind::kCategorical);
  for (auto& b : counts) add_numeric(b, ColumnKind::kNumeric);
  for (auto& b : deltas) add_numeric(b, ColumnKind::kNumeric);
  for (auto& b : vesta) add_numeric(b, ColumnKind::kNumeric);

  SyntheticTables out;
  out.transactions = Table(Schema(std::move(specs)), std::move(columns), n);

  // Identity records exist for a subset of transactions, more often for fraud.
  std::vector<std::size_t> with_identity;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = labels[i] ? std::min(0.95, 2.5 * options.identity_fraction)
                               : options.identity_fraction;
    if (rng.uniform() < p) with_identity.push_back(i);
  }
  rng.shuffle(with_identity);

  static constexpr Choice kBrowser[] = {{"chrome", 0.5}, {"mobile safari", 0.25}, {"firefox", 0.1},
                                        {"edge", 0.1}, {"samsung browser", 0.05}};
  static constexpr Choice kDeviceNeg[] = {{"desktop", 0.65}, {"mobile", 0.35}};
  static constexpr Choice kDevicePos[] = {{"desktop", 0.40}, {"mobile", 0.60}};
  TextBuilder key{"TransactionID"}, browser{"id_31"}, device{"DeviceType"};
  NumericBuilder id01{"id_01"}, id02{"id_02"};
  for (std::size_t i : with_identity) {
    key.push(fmt::format("{}", 2987000 + i));
    id01.push(-5.0 * static_cast<double>(rng.below(20)));
    if (rng.uniform() < 0.05) {
      id02.push_missing();
    } else {
      id02.push(static_cast<double>(1 + rng.below(600000)));
    }
    if (rng.uniform() < 0.10) {
      browser.push_missing();
    } else {
      browser.push(pick(rng, kBrowser));
    }
    if (rng.uniform() < 0.03) {
      device.push_missing();
    } else {
      device.push(pick(rng, labels[i] ? std::span<const Choice>(kDevicePos)
                                      : std::span<const Choice>(kDeviceNeg)));
    }
  }
  const std::size_t n_identity = with_identity.size();
  std::vector<ColumnSpec> id_specs = {{"TransactionID", ColumnKind::kKey},
                                      {"id_01", ColumnKind::kNumeric},
                                      {"id_02", ColumnKind::kNumeric},
                                      {"id_31", ColumnKind::kCategorical},
                                      {"DeviceType", ColumnKind::kCategorical}};
  std::vector<Column> id_columns;
  id_columns.push_back(Column::text(std::move(key.values), std::move(key.missing)));
  id_columns.push_back(Column::numeric(std::move(id01.values), std::move(id01.missing)));
  id_columns.push_back(Column::numeric(std::move(id02.values), std::move(id02.missing)));
  id_columns.push_back(Column::text(std::move(browser.values), std::move(browser.missing)));
  id_columns.push_back(Column::text(std::move(device.values), std::move(device.missing)));
  out.identity = Table(Schema(std::move(id_specs)), std::move(id_columns), n_identity);

  out.schema.key_column = "TransactionID";
  out.schema.target_column = "isFraud";
  out.schema.categorical = {"ProductCD", "card4", "card6", "P_emaildomain", "id_31", "DeviceType"};
  return out;
}

void write_synthetic(const SyntheticTables& tables, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_csv(dir / "train_transaction.csv", tables.transactions);
  write_csv(dir / "train_identity.csv", tables.identity);
  std::ofstream cfg(dir / "schema.cfg");
  if (!cfg) throw Error(fmt::format("cannot write '{}'", (dir / "schema.cfg").string()));
  cfg << "# Column roles for the synthetic transaction/identity tables.\n";
  cfg << "key_column = " << tables.schema.key_column << "\n";
  cfg << "target_column = " << tables.schema.target_column << "\n";
  cfg << "categorical = " << fmt::format("{}", fmt::join(tables.schema.categorical, ", ")) << "\n";
  cfg << "na_tokens = \"\", NaN, NA\n";
}

}  // namespace fraudstack::data
