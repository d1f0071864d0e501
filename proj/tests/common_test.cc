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

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fraudstack/common/error.h"
#include "fraudstack/common/kv_config.h"
#include "fraudstack/common/matrix.h"
#include "fraudstack/common/parallel.h"
#include "fraudstack/common/random.h"

namespace fraudstack {
namespace {

TEST(Matrix, RowAndColumnAccess) {
  Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(m(1, 2), 6);
  EXPECT_EQ(m.row(1)[0], 4);
  EXPECT_EQ(m.column(1), (std::vector<double>{2, 5}));
  const std::vector<std::size_t> cols = {2, 0};
  const Matrix s = m.select_columns(cols);
  EXPECT_EQ(s, Matrix(2, 2, {3, 1, 6, 4}));
  const std::vector<std::size_t> rows = {1, 1};
  EXPECT_EQ(m.select_rows(rows), Matrix(2, 3, {4, 5, 6, 4, 5, 6}));
}

TEST(Matrix, ResolveColumnsReportsMissing) {
  const std::vector<std::string> available = {"a", "b", "c"};
  const std::vector<std::string> wanted = {"c", "a"};
  EXPECT_EQ(resolve_columns(available, wanted), (std::vector<std::size_t>{2, 0}));
  const std::vector<std::string> bad = {"a", "zz"};
  try {
    resolve_columns(available, bad);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformAndBelowRanges) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Rng, SampleWithoutReplacementIsDistinct) {
  Rng rng(5);
  const auto s = rng.sample_without_replacement(50, 20);
  ASSERT_EQ(s.size(), 20u);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 20u);
  for (auto v : s) EXPECT_LT(v, 50u);
}

TEST(Parallel, ResultsIndependentOfWorkers) {
  std::vector<int> one(1000), four(1000);
  parallel_for(one.size(), 1, [&](std::size_t i) { one[i] = static_cast<int>(i * i % 97); });
  parallel_for(four.size(), 4, [&](std::size_t i) { four[i] = static_cast<int>(i * i % 97); });
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 42) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(KvConfig, ParsesValuesCommentsAndLists) {
  const auto cfg = KvConfig::parse(
      "# header\n"
      "seed = 42\n"
      "name = fraud\n"
      "items = a, \"b, c\", \"\"\n"
      "flag = true\n"
      "base1.max_depth = 4\n");
  EXPECT_EQ(cfg.get_int("seed", 0), 42);
  EXPECT_EQ(cfg.get_string("name", ""), "fraud");
  EXPECT_EQ(cfg.get_list("items"), (std::vector<std::string>{"a", "b, c", ""}));
  EXPECT_TRUE(cfg.get_bool("flag", false));
  EXPECT_EQ(cfg.with_prefix("base1.").at("max_depth"), "4");
  EXPECT_EQ(cfg.get_double("missing", 1.5), 1.5);
}

TEST(KvConfig, RejectsMalformedNumbers) {
  const auto cfg = KvConfig::parse("seed = forty\n");
  EXPECT_THROW(cfg.get_int("seed", 0), Error);
  EXPECT_THROW(parse_double("1.5x", "v"), Error);
}

}  // namespace
}  // namespace fraudstack
