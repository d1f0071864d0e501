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

#ifndef FRAUDSTACK_DATA_CONTAINER_H_
#define FRAUDSTACK_DATA_CONTAINER_H_

#include <filesystem>

#include "fraudstack/data/table.h"

namespace fraudstack::data {

// Prepared-data container:
//
//   bytes 0..7    magic "FSTABLE\0"
//   bytes 8..11   format version (u32, little-endian)
//   bytes 12..19  header length N (u64, little-endian)
//   next N bytes  JSON header {"n_rows": .., "columns": [{"name", "kind"}]}
//   then          one block per column of n_rows little-endian f64 values;
//                 NaN marks a missing value.
//
// Only numerically stored tables can be written.
inline constexpr std::uint32_t kContainerVersion = 1;

void write_container(const std::filesystem::path& path, const Table& table);
Table read_container(const std::filesystem::path& path);

}  // namespace fraudstack::data

#endif  // FRAUDSTACK_DATA_CONTAINER_H_
