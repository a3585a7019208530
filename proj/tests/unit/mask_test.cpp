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

#include "avseg/mask.hpp"

#include <gtest/gtest.h>

#include "avseg/error.hpp"
#include "oracles.hpp"

namespace avseg {
namespace {

BinaryMask columns(std::size_t h, std::size_t w, std::size_t c0, std::size_t c1) {
  BinaryMask m(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = c0; c < c1; ++c) m.set(r, c);
  }
  return m;
}

TEST(BinaryMaskTest, RejectsBadConstruction) {
  EXPECT_THROW(BinaryMask(0, 3), ValidationError);
  EXPECT_THROW(BinaryMask(2, 2, {0, 1, 1}), ValidationError);
  EXPECT_THROW(BinaryMask(1, 2, {0, 2}), ValidationError);
}

TEST(BinaryMaskTest, RleRoundTrip) {
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::size_t h = rng.between(1, 9), w = rng.between(1, 9);
    const auto m = testing::random_mask(rng, h, w, rng.uniform(0.0, 1.0));
    const auto counts = m.to_rle();
    EXPECT_EQ(BinaryMask::from_rle(h, w, counts), m);
  }
}

TEST(BinaryMaskTest, RleStartsWithZeroRun) {
  BinaryMask m(1, 3, {1, 1, 0});
  EXPECT_EQ(m.to_rle(), (std::vector<std::uint64_t>{0, 2, 1}));
  const std::vector<std::uint64_t> short_counts{1, 1};
  EXPECT_THROW(BinaryMask::from_rle(1, 3, short_counts), ValidationError);
}

TEST(IouTest, Examples) {
  const auto left = columns(4, 4, 0, 2);
  const auto right = columns(4, 4, 2, 4);
  const auto full = columns(4, 4, 0, 4);
  EXPECT_DOUBLE_EQ(iou(left, left), 1.0);
  EXPECT_DOUBLE_EQ(iou(left, right), 0.0);
  EXPECT_DOUBLE_EQ(iou(left, full), 0.5);
  EXPECT_DOUBLE_EQ(iou(BinaryMask(2, 2), BinaryMask(2, 2)), 0.0);
  EXPECT_THROW(iou(left, BinaryMask(4, 5)), DimensionMismatch);
}

TEST(UnionTest, Examples) {
  const std::vector<BinaryMask> halves{columns(4, 4, 0, 2), columns(4, 4, 2, 4)};
  EXPECT_EQ(union_of(halves, 4, 4), columns(4, 4, 0, 4));
  const std::vector<BinaryMask> one{columns(3, 5, 1, 2)};
  EXPECT_EQ(union_of(one, 3, 5), one[0]);
  EXPECT_EQ(union_of({}, 2, 2), BinaryMask(2, 2));
  EXPECT_THROW(union_of(halves, 4, 3), DimensionMismatch);
}

TEST(TwoPhaseFilterTest, DuplicateSuppressed) {
  const auto ma = columns(4, 4, 0, 2);
  const std::vector<ScoredInstance> c{{"dog", 0.9, ma}, {"dog", 0.8, ma}};
  const auto kept = two_phase_filter(c, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], c[0]);
}

TEST(TwoPhaseFilterTest, DistinctLabelsKeptInPhaseOne) {
  const std::vector<ScoredInstance> c{{"dog", 0.9, columns(4, 4, 0, 2)},
                                      {"cat", 0.8, columns(4, 4, 2, 4)}};
  const auto sel = two_phase_select(c, 0.5);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0], (FilterSelection{0, FilterPhase::kTopPerLabel}));
  EXPECT_EQ(sel[1], (FilterSelection{1, FilterPhase::kTopPerLabel}));
}

TEST(TwoPhaseFilterTest, LowOverlapAdmittedInPhaseTwo) {
  // 5x2 masks: A covers 3 pixels, C covers 3, they share 1 -> IoU 1/5.
  BinaryMask a(5, 2, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
  BinaryMask c(5, 2, {0, 0, 1, 1, 1, 0, 0, 0, 0, 0});
  ASSERT_DOUBLE_EQ(iou(a, c), 0.2);
  const std::vector<ScoredInstance> cands{{"dog", 0.9, a}, {"dog", 0.7, c}};
  const auto sel = two_phase_select(cands, 0.5);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[1], (FilterSelection{1, FilterPhase::kIouAdmitted}));
}

TEST(TwoPhaseFilterTest, PhaseTwoChecksEveryKeptMask) {
  // The cat overlaps the second dog although the dog winner does not.
  const auto dog = columns(4, 4, 0, 1);
  const auto cat = columns(4, 4, 2, 4);
  const auto dog2 = columns(4, 4, 2, 4);
  const std::vector<ScoredInstance> c{{"dog", 0.9, dog}, {"cat", 0.8, cat}, {"dog", 0.7, dog2}};
  EXPECT_EQ(two_phase_filter(c, 0.5).size(), 2u);
}

TEST(TwoPhaseFilterTest, TiesResolvedByIndexAndLabel) {
  const auto m = columns(2, 2, 0, 1);
  const std::vector<ScoredInstance> c{{"b", 0.5, m}, {"a", 0.5, m}, {"a", 0.5, m}};
  const auto sel = two_phase_select(c, 0.5);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0].input_index, 1u);
  EXPECT_EQ(sel[1].input_index, 0u);
}

TEST(TwoPhaseFilterTest, RandomSetsAreSound) {
  testing::Rng rng(5);
  const std::vector<std::string> labels{"dog", "cat", "man"};
  for (int i = 0; i < 100; ++i) {
    const auto cands = testing::random_candidates(rng, 6, 6, labels, 8);
    const double t = rng.uniform(0.1, 0.9);
    EXPECT_EQ(testing::check_filter_soundness(cands, two_phase_select(cands, t), t), "");
  }
}

TEST(TwoPhaseFilterTest, RejectsMixedShapes) {
  const std::vector<ScoredInstance> c{{"dog", 0.9, BinaryMask(2, 2)}, {"dog", 0.7, BinaryMask(2, 3)}};
  EXPECT_THROW(two_phase_filter(c, 0.5), DimensionMismatch);
}

}  // namespace
}  // namespace avseg
