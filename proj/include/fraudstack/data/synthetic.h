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

#ifndef FRAUDSTACK_DATA_SYNTHETIC_H_
#define FRAUDSTACK_DATA_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>

#include "fraudstack/data/schema.h"
#include "fraudstack/data/table.h"

namespace fraudstack::data {

struct SyntheticOptions {
  std::size_t n_rows = 10000;
  double positive_rate = 0.035;
  // Fraction of transactions that carry an identity record.
  double identity_fraction = 0.25;
  std::uint64_t seed = 42;
};

// Imbalanced transaction/identity table pair shaped like card-fraud data:
// a key column, categorical columns with gaps, count and timedelta columns,
// and engineered columns of which a few carry signal. Fraud rows come from two
// Gaussian clusters in the (V12, V13) plane placed symmetrically about the
// legitimate cloud, so no linear score separates them.
struct SyntheticTables {
  Table transactions;
  Table identity;
  SchemaConfig schema;
};

SyntheticTables generate_synthetic(const SyntheticOptions& options);

// Writes train_transaction.csv, train_identity.csv and schema.cfg into `dir`.
void write_synthetic(const SyntheticTables& tables, const std::filesystem::path& dir);

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_SYNTHETIC_H_
