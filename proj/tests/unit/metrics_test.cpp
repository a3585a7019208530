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

#include "avseg/metrics.hpp"

#include <gtest/gtest.h>

#include "avseg/error.hpp"
#include "oracles.hpp"

namespace avseg {
namespace {

BinaryMask rows(std::size_t h, std::size_t w, std::size_t r0, std::size_t r1) {
  BinaryMask m(h, w);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = 0; c < w; ++c) m.set(r, c);
  return m;
}

TEST(JaccardTest, Examples) {
  const auto gt = rows(4, 4, 0, 4);
  EXPECT_EQ(jaccard(gt, gt), 1.0);
  EXPECT_EQ(jaccard(rows(4, 4, 0, 2), rows(4, 4, 2, 4)), 0.0);
  EXPECT_EQ(jaccard(rows(4, 4, 0, 2), gt), 0.5);
  EXPECT_EQ(jaccard(BinaryMask(2, 2), BinaryMask(2, 2)), 1.0);
  EXPECT_THROW(jaccard(gt, BinaryMask(4, 3)), DimensionMismatch);
}

TEST(FscoreTest, Examples) {
  EXPECT_NEAR(fscore_from(1.0, 0.5, 0.3), 0.8125, 1e-12);
  const auto gt = rows(4, 4, 1, 3);
  EXPECT_EQ(fscore(gt, gt), 1.0);
  EXPECT_EQ(fscore(BinaryMask(4, 4), gt), 0.0);
  EXPECT_EQ(fscore(BinaryMask(4, 4), BinaryMask(4, 4)), 1.0);
  EXPECT_THROW(fscore(gt, gt, -0.1), ValidationError);
}

TEST(FscoreTest, HalfRecall) {
  const auto e = evaluate_frame(rows(4, 4, 0, 1), rows(4, 4, 0, 2));
  EXPECT_EQ(e.precision, 1.0);
  EXPECT_EQ(e.recall, 0.5);
  EXPECT_NEAR(e.f, 0.8125, 1e-12);
}

TEST(DatasetTest, Means) {
  const auto m = rows(3, 3, 0, 2);
  EXPECT_EQ(evaluate_dataset({{m, m}}).mean_j, 1.0);
  const auto d = evaluate_dataset({{m, m}, {rows(3, 3, 2, 3), m}});
  EXPECT_EQ(d.mean_j, 0.5);
  EXPECT_THROW(evaluate_dataset({}), ValidationError);
}

TEST(DatasetTest, MatchesPerFrameRecomputation) {
  testing::Rng rng(41);
  std::vector<FramePair> frames;
  double j = 0.0, f = 0.0;
  for (int i = 0; i < 10; ++i) {
    frames.push_back({testing::random_mask(rng, 6, 6, 0.4), testing::random_mask(rng, 6, 6, 0.4)});
    const auto c = testing::count_pixels(frames.back().pred, frames.back().gt);
    j += testing::oracle_jaccard(c);
    f += testing::oracle_fscore(c, 0.3);
  }
  const auto d = evaluate_dataset(frames);
  EXPECT_DOUBLE_EQ(d.mean_j, j / 10.0);
  EXPECT_DOUBLE_EQ(d.mean_f, f / 10.0);
}

TEST(PerClassTest, UnionPerLabel) {
  const std::vector<ScoredInstance> pred{{"dog", 1.0, rows(4, 4, 0, 1)}, {"dog", 1.0, rows(4, 4, 1, 2)}};
  const std::vector<ScoredInstance> gt{{"dog", 1.0, rows(4, 4, 0, 2)}, {"cat", 1.0, rows(4, 4, 3, 4)}};
  const auto pc = per_class_jaccard(pred, gt, 4, 4);
  EXPECT_EQ(pc.at("dog"), 1.0);
  EXPECT_EQ(pc.at("cat"), 0.0);
}

}  // namespace
}  // namespace avseg
