// Copyright 2026 The avseg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avseg/align.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "avseg/error.hpp"
#include "avseg/io.hpp"
#include "oracles.hpp"

namespace avseg {
namespace {

using Strings = std::vector<std::string>;

TEST(CosineTest, Examples) {
  const std::vector<double> v{0.3, -2.0, 5.0};
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-15);
  const std::vector<double> x{1.0, 0.0}, y{0.0, 1.0}, d{1.0, 1.0};
  EXPECT_EQ(cosine(x, y), 0.0);
  EXPECT_NEAR(cosine(x, d), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(cosine(x, v), DimensionMismatch);
  const std::vector<double> z{0.0, 0.0};
  EXPECT_THROW(cosine(x, z), ValidationError);
}

TEST(EmbeddingTableTest, ParsesWithAndWithoutHeader) {
  const auto a = EmbeddingTable::parse("Bird 1 0\nhand 0 1\n");
  EXPECT_EQ(a.dimension(), 2u);
  EXPECT_EQ(a.size(), 2u);
  ASSERT_NE(a.find("bird"), nullptr);
  const auto b = EmbeddingTable::parse("2 3\nbird 1 0 0\nhand 0 1 0\n");
  EXPECT_EQ(b.dimension(), 3u);
  EXPECT_EQ(b.size(), 2u);
}

TEST(EmbeddingTableTest, RejectsMalformedRows) {
  EXPECT_THROW(EmbeddingTable::parse("bird 1 0\nhand 0\n"), ParseError);
  EXPECT_THROW(EmbeddingTable::parse("bird 1 x\n"), ParseError);
  EXPECT_THROW(EmbeddingTable::parse("bird 0 0\n"), ParseError);
}

TEST(EmbeddingTableTest, FirstDuplicateWinsAndPhrasesAverage) {
  auto t = EmbeddingTable::parse("lawn 1 0\nmower 0 1\nlawn 5 5\n");
  EXPECT_EQ(*t.find("lawn"), (std::vector<double>{1, 0}));
  EXPECT_EQ(*t.embed("Lawn Mower"), (std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(t.embed("lawn robot").has_value());
  EXPECT_FALSE(t.insert("LAWN", {3, 3}));
  EXPECT_THROW(t.insert("x", {1, 2, 3}), ValidationError);
}

TEST(CanonicalizeTest, ParrotFixture) {
  const auto table = EmbeddingTable::parse(
      read_text_file(std::string(AVSEG_DATA_DIR) + "/fixtures/parrot_embeddings.txt"));
  const Strings nouns{"parrot", "hand", "woman"};
  const Strings cats{"bird", "woman", "hand", "man", "dog"};
  const auto c = canonicalize_nouns(nouns, cats, table);
  EXPECT_EQ(c.labels, (Strings{"bird", "hand", "woman"}));
  const Strings sounding{"bird"};
  EXPECT_EQ(silent_labels(c.labels, sounding), (Strings{"hand", "woman"}));
}

TEST(CanonicalizeTest, CategoryMapsToItselfAndTiesGoLow) {
  EmbeddingTable t(2);
  t.insert("zebra", {1, 0});
  t.insert("apple", {1, 0});
  t.insert("pear", {0, 1});
  t.insert("q", {2, 0.1});
  const Strings cats{"zebra", "apple", "pear"};
  EXPECT_EQ(canonicalize_nouns(Strings{"pear"}, cats, t).labels, Strings{"pear"});
  EXPECT_EQ(canonicalize_nouns(Strings{"q"}, cats, t).labels, Strings{"apple"});
}

TEST(CanonicalizeTest, DropsOutOfVocabulary) {
  EmbeddingTable t(2);
  t.insert("a", {1, 0});
  t.insert("n", {0.9, 0.1});
  const auto c = canonicalize_nouns(Strings{"n", "ghost"}, Strings{"a", "phantom"}, t);
  EXPECT_EQ(c.labels, Strings{"a"});
  EXPECT_EQ(c.dropped_nouns, Strings{"ghost"});
  EXPECT_EQ(c.dropped_categories, Strings{"phantom"});
  EXPECT_THROW(canonicalize_nouns(Strings{"n"}, Strings{"phantom"}, t), ValidationError);
}

TEST(CanonicalizeTest, SimilarityFloor) {
  EmbeddingTable t(2);
  t.insert("a", {1, 0});
  t.insert("n", {0, 1});
  AlignOptions opts;
  opts.similarity_floor = 0.5;
  const auto c = canonicalize_nouns(Strings{"n"}, Strings{"a"}, t, opts);
  EXPECT_TRUE(c.labels.empty());
  EXPECT_EQ(c.below_floor, Strings{"n"});
}

TEST(CanonicalizeTest, AgreesWithReferenceArgmax) {
  testing::Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto v = testing::random_vocabulary(rng, 5, 6, 4);
    for (const auto& n : v.nouns) {
      const auto got = canonicalize_nouns(Strings{n}, v.categories, v.table).labels;
      EXPECT_EQ(got.at(0), *testing::oracle_best_category(*v.table.find(n), v.categories, v.table));
    }
  }
}

TEST(SilentLabelsTest, Examples) {
  const Strings canon{"bird", "hand", "woman"};
  EXPECT_TRUE(silent_labels(canon, canon).empty());
  EXPECT_EQ(silent_labels(canon, Strings{}), canon);
}

}  // namespace
}  // namespace avseg
