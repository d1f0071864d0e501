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

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fraudstack/common/error.h"
#include "fraudstack/data/container.h"
#include "fraudstack/data/csv.h"
#include "fraudstack/data/preprocess.h"
#include "fraudstack/data/schema.h"
#include "fraudstack/data/synthetic.h"
#include "fraudstack/data/table.h"
#include "test_util.h"

namespace fraudstack::data {
namespace {

using fraudstack::testing::TempDir;
using fraudstack::testing::read_file;
using fraudstack::testing::write_file;

std::vector<std::vector<std::string>> read_all(const std::string& text) {
  std::istringstream in(text);
  CsvReader reader(in);
  std::vector<std::vector<std::string>> out;
  while (auto rec = reader.next()) out.push_back(*rec);
  return out;
}

Table small_table() {
  Schema schema({{"id", ColumnKind::kKey},
                 {"label", ColumnKind::kTarget},
                 {"amount", ColumnKind::kNumeric},
                 {"card", ColumnKind::kCategorical}});
  return Table(schema,
               {Column::text({"a", "b", "c", "d"}, {0, 0, 0, 0}),
                Column::numeric({0, 1, 0, 1}),
                Column::numeric({5, NAN, 1, 3}, {0, 1, 0, 0}),
                Column::text({"visa", "", "amex", "visa"}, {0, 1, 0, 0})},
               4);
}

TEST(Csv, QuotesCrlfAndEmbeddedNewlines) {
  const auto rows = read_all("a,b,c\r\n\"x,1\",\"say \"\"hi\"\"\",\"two\nlines\"\r\n,,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"x,1", "say \"hi\"", "two\nlines"}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"", "", ""}));
}

TEST(Csv, ReportsRecordLine) {
  std::istringstream in("h\n\"a\nb\"\nc\n");
  CsvReader reader(in);
  reader.next();
  reader.next();
  EXPECT_EQ(reader.line(), 2u);
  reader.next();
  EXPECT_EQ(reader.line(), 4u);
}

TEST(Csv, LoadMatchesSchemaInAnyOrder) {
  TempDir dir;
  write_file(dir / "t.csv", "amount,card,id,label\n5,visa,a,0\nNA,,b,1\n");
  Schema schema({{"id", ColumnKind::kKey},
                 {"label", ColumnKind::kTarget},
                 {"amount", ColumnKind::kNumeric},
                 {"card", ColumnKind::kCategorical}});
  const Table t = load_csv(dir / "t.csv", schema);
  ASSERT_EQ(t.n_rows(), 2u);
  EXPECT_EQ(t.column("amount").numbers()[0], 5.0);
  EXPECT_TRUE(t.column("amount").is_missing(1));
  EXPECT_TRUE(t.column("card").is_missing(1));
  EXPECT_EQ(t.labels(), (std::vector<int>{0, 1}));
}

TEST(Csv, HeaderMismatchListsNames) {
  TempDir dir;
  write_file(dir / "t.csv", "amount,extra\n1,2\n");
  Schema schema({{"amount", ColumnKind::kNumeric}, {"card", ColumnKind::kCategorical}});
  try {
    load_csv(dir / "t.csv", schema);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("card"), std::string::npos);
    EXPECT_NE(msg.find("extra"), std::string::npos);
  }
}

TEST(Csv, FieldCountErrorNamesLine) {
  TempDir dir;
  write_file(dir / "t.csv", "a,b\n1,2\n3\n");
  Schema schema({{"a", ColumnKind::kNumeric}, {"b", ColumnKind::kNumeric}});
  try {
    load_csv(dir / "t.csv", schema);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, WriteThenLoadRoundTrip) {
  TempDir dir;
  const Table t = small_table();
  write_csv(dir / "t.csv", t);
  EXPECT_EQ(load_csv(dir / "t.csv", t.schema()), t);
}

TEST(Schema, RejectsDuplicatesAndTwoTargets) {
  EXPECT_THROW(Schema({{"a", ColumnKind::kNumeric}, {"a", ColumnKind::kNumeric}}), Error);
  EXPECT_THROW(Schema({{"a", ColumnKind::kTarget}, {"b", ColumnKind::kTarget}}), Error);
}

TEST(Schema, ConfigResolvesRoles) {
  const auto cfg = SchemaConfig::from_kv(
      KvConfig::parse("key_column = id\ntarget_column = y\ncategorical = c1, c2\n"));
  const Schema s = cfg.resolve({"id", "x", "c2", "y"});
  EXPECT_EQ(s[s.index_of("id")].kind, ColumnKind::kKey);
  EXPECT_EQ(s[s.index_of("y")].kind, ColumnKind::kTarget);
  EXPECT_EQ(s[s.index_of("c2")].kind, ColumnKind::kCategorical);
  EXPECT_EQ(s[s.index_of("x")].kind, ColumnKind::kNumeric);
}

TEST(Preprocess, LeftJoinKeepsLeftRowsAndFillsMissing) {
  const Table left = small_table();
  Schema rs({{"id", ColumnKind::kKey}, {"dev", ColumnKind::kCategorical}});
  const Table right(rs, {Column::text({"c", "a"}, {0, 0}), Column::text({"m", "d"}, {0, 0})}, 2);
  const Table joined = left_join(left, right, "id");
  ASSERT_EQ(joined.n_rows(), 4u);
  const auto& dev = joined.column("dev");
  EXPECT_EQ(dev.strings()[0], "d");
  EXPECT_TRUE(dev.is_missing(1));
  EXPECT_EQ(dev.strings()[2], "m");
  EXPECT_TRUE(dev.is_missing(3));
}

TEST(Preprocess, LeftJoinRejectsDuplicateRightKeys) {
  Schema rs({{"id", ColumnKind::kKey}, {"dev", ColumnKind::kCategorical}});
  const Table right(rs, {Column::text({"a", "a"}, {0, 0}), Column::text({"m", "d"}, {0, 0})}, 2);
  EXPECT_THROW(left_join(small_table(), right, "id"), Error);
}

TEST(Preprocess, LeftJoinRejectsNameCollision) {
  Schema rs({{"id", ColumnKind::kKey}, {"amount", ColumnKind::kNumeric}});
  const Table right(rs, {Column::text({"a"}, {0}), Column::numeric({1.0})}, 1);
  EXPECT_THROW(left_join(small_table(), right, "id"), Error);
}

TEST(Preprocess, ImputeMedianAndMode) {
  const Table t = impute(small_table());
  // Observed amounts 5, 1, 3: median 3.
  EXPECT_EQ(t.column("amount").numbers()[1], 3.0);
  EXPECT_EQ(t.column("card").strings()[1], "visa");
  EXPECT_EQ(t.column("amount").missing_count(), 0u);
  EXPECT_EQ(t.column("card").missing_count(), 0u);
}

TEST(Preprocess, ImputeLowerMedianAndTieBreaks) {
  Schema s({{"x", ColumnKind::kNumeric}, {"c", ColumnKind::kCategorical}});
  const Table t(s,
                {Column::numeric({4, 1, NAN, 2, 3}, {0, 0, 1, 0, 0}),
                 Column::text({"b", "a", "", "b", "a"}, {0, 0, 1, 0, 0})},
                5);
  const Table out = impute(t);
  EXPECT_EQ(out.column("x").numbers()[2], 2.0);
  EXPECT_EQ(out.column("c").strings()[2], "a");
}

TEST(Preprocess, ImputeAllMissingColumns) {
  Schema s({{"x", ColumnKind::kNumeric}, {"c", ColumnKind::kCategorical}});
  const Table t(s, {Column::all_missing(false, 3), Column::all_missing(true, 3)}, 3);
  const Table out = impute(t);
  EXPECT_EQ(out.column("x").numbers(), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(out.column("c").strings()[0], kAllMissingCategory);
}

TEST(Preprocess, LabelEncodeFirstAppearanceAndUnseen) {
  const auto [encoded, map] = label_encode(impute(small_table()));
  const auto& card = encoded.column("card");
  EXPECT_FALSE(card.is_text());
  EXPECT_EQ(card.numbers(), (std::vector<double>{0, 0, 1, 0}));
  EXPECT_EQ(map.encode("card", "amex"), 1);
  EXPECT_EQ(map.encode("card", "discover"), map.unseen_code("card"));
  EXPECT_EQ(map.decode("card", 1), "amex");
  EXPECT_THROW(map.decode("card", 5), Error);
}

TEST(Preprocess, EncodingMapJsonRoundTrip) {
  const auto [encoded, map] = label_encode(impute(small_table()));
  const auto doc = map.to_json();
  EXPECT_EQ(doc.at("format_version"), 1);
  const auto again = EncodingMap::from_json(doc);
  EXPECT_EQ(again.to_json(), doc);
  EXPECT_EQ(again.apply(impute(small_table())), encoded);
}

TEST(Preprocess, StratifiedSplitProportions) {
  for (std::size_t n : {1000u, 10000u}) {
    std::vector<int> y(n, 0);
    const std::size_t pos = static_cast<std::size_t>(std::lround(0.035 * static_cast<double>(n)));
    for (std::size_t i = 0; i < pos; ++i) y[i * (n / pos)] = 1;
    const auto split = stratified_split_indices(y, 0.2, 9);
    std::size_t test_pos = 0;
    for (auto i : split.test) test_pos += static_cast<std::size_t>(y[i]);
    EXPECT_NEAR(static_cast<double>(test_pos), 0.2 * static_cast<double>(pos), 1.0);
    EXPECT_NEAR(static_cast<double>(split.test.size() - test_pos),
                0.2 * static_cast<double>(n - pos), 1.0);
    std::vector<std::size_t> all = split.train;
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    EXPECT_EQ(all, expected);
    EXPECT_TRUE(std::is_sorted(split.test.begin(), split.test.end()));
  }
}

TEST(Preprocess, StratifiedSplitDeterministicPerSeed) {
  std::vector<int> y(500, 0);
  for (std::size_t i = 0; i < 500; i += 9) y[i] = 1;
  const auto a = stratified_split_indices(y, 0.2, 1);
  const auto b = stratified_split_indices(y, 0.2, 1);
  const auto c = stratified_split_indices(y, 0.2, 2);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.test, c.test);
}

TEST(Preprocess, StratifiedSplitTwoRows) {
  const std::vector<int> y = {0, 1};
  const auto split = stratified_split_indices(y, 0.5, 0);
  EXPECT_EQ(split.test.size(), 1u);
  EXPECT_EQ(split.train.size(), 1u);
}

TEST(Container, RoundTripIsExact) {
  TempDir dir;
  const auto [encoded, map] = label_encode(impute(small_table()));
  Schema schema({{"label", ColumnKind::kTarget},
                 {"amount", ColumnKind::kNumeric},
                 {"card", ColumnKind::kCategorical}});
  const Table numeric(schema,
                      {encoded.column("label"), Column::numeric({0.1, NAN, -3e300, 7}, {0, 1, 0, 0}),
                       encoded.column("card")},
                      4);
  write_container(dir / "t.bin", numeric);
  EXPECT_EQ(read_container(dir / "t.bin"), numeric);
  write_container(dir / "t2.bin", numeric);
  EXPECT_EQ(read_file(dir / "t.bin"), read_file(dir / "t2.bin"));
}

TEST(Container, RejectsBadMagic) {
  TempDir dir;
  write_file(dir / "bad.bin", "NOTATABLE-------------------");
  EXPECT_THROW(read_container(dir / "bad.bin"), Error);
}

TEST(Synthetic, ShapeRateAndDeterminism) {
  SyntheticOptions options;
  options.n_rows = 4000;
  const auto a = generate_synthetic(options);
  const auto b = generate_synthetic(options);
  EXPECT_EQ(a.transactions, b.transactions);
  EXPECT_EQ(a.identity, b.identity);
  EXPECT_EQ(a.transactions.n_rows(), 4000u);
  const auto y = a.transactions.labels();
  const double rate = std::accumulate(y.begin(), y.end(), 0.0) / 4000.0;
  EXPECT_NEAR(rate, 0.035, 0.002);
  EXPECT_LT(a.identity.n_rows(), 4000u);
}

TEST(Synthetic, FilesLoadThroughSchema) {
  TempDir dir;
  SyntheticOptions options;
  options.n_rows = 300;
  const auto tables = generate_synthetic(options);
  write_synthetic(tables, dir.path());
  const auto cfg = SchemaConfig::from_kv(KvConfig::load(dir / "schema.cfg"));
  const Table tx = load_csv(dir / "train_transaction.csv",
                            cfg.resolve(read_csv_header(dir / "train_transaction.csv")),
                            cfg.na_tokens);
  EXPECT_EQ(tx.n_rows(), 300u);
  const Table id = load_csv(dir / "train_identity.csv",
                            cfg.resolve(read_csv_header(dir / "train_identity.csv")),
                            cfg.na_tokens);
  const Table joined = left_join(tx, id, cfg.key_column);
  EXPECT_EQ(joined.n_rows(), 300u);
}

}  // namespace
}  // namespace fraudstack::data
