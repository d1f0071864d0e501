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

#ifndef FRAUDSTACK_COMMON_RANDOM_H_
#define FRAUDSTACK_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fraudstack {

// Seeded generator with platform-independent draws. The engine sequence of
// std::mt19937_64 is fixed by the standard but the std distributions are not,
// so the draws below are computed directly from engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream from a base seed and a stream tag.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  // `count` distinct indices from [0, n), in sampled order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fraudstack

#endif  // FRAUDSTACK_COMMON_RANDOM_H_
