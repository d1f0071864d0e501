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

#ifndef FRAUDSTACK_RESAMPLE_KFOLD_H_
#define FRAUDSTACK_RESAMPLE_KFOLD_H_

#include <cstdint>
#include <span>
#include <vector>

namespace fraudstack::resample {

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold;  // per row, in [0, k)

  std::vector<std::size_t> train_rows(int f) const;
  std::vector<std::size_t> test_rows(int f) const;
};

// Shuffles each class with the seeded generator and deals its rows round-robin
// over the folds, so per-fold class counts differ from floor(count / k) by at
// most one. Throws when a class has fewer than k rows.
FoldAssignment stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

}  // namespace fraudstack::resample

#endif  // FRAUDSTACK_RESAMPLE_KFOLD_H_
