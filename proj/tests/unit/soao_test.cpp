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

#include "avseg/soao.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "avseg/error.hpp"
#include "oracles.hpp"

namespace avseg {
namespace {

SoftMask constant(std::size_t h, std::size_t w, double v) { return {h, w, std::vector<double>(h * w, v)}; }

SoftMask from_binary(const BinaryMask& m) {
  SoftMask s{m.height(), m.width(), {}};
  for (auto b : m.bits()) s.values.push_back(b);
  return s;
}

BinaryMask ones(std::size_t h, std::size_t w) { return BinaryMask(h, w, std::vector<std::uint8_t>(h * w, 1)); }

TEST(FocalLossTest, HalfProbabilityOnForeground) {
  const double expected = 0.25 * 0.25 * std::log(2.0);
  EXPECT_NEAR(focal_loss(constant(3, 3, 0.5), ones(3, 3), 2.0, 0.25), expected, 1e-12);
  EXPECT_NEAR(expected, 0.043321, 1e-6);
}

TEST(FocalLossTest, PerfectPredictionNearZero) {
  testing::Rng rng(1);
  const auto gt = testing::random_mask(rng, 5, 5, 0.5);
  EXPECT_NEAR(focal_loss(from_binary(gt), gt, 2.0, 0.25), 0.0, 1e-6);
}

TEST(FocalLossTest, ShapeMismatchThrows) {
  EXPECT_THROW(focal_loss(constant(2, 2, 0.5), ones(2, 3), 2.0, 0.25), DimensionMismatch);
}

TEST(DiceLossTest, Examples) {
  testing::Rng rng(2);
  auto gt = testing::random_mask(rng, 4, 4, 0.5);
  gt.set(0, 0);
  EXPECT_DOUBLE_EQ(dice_loss(from_binary(gt), gt, 0.0), 0.0);
  const double g = static_cast<double>(gt.count());
  EXPECT_DOUBLE_EQ(dice_loss(constant(4, 4, 0.0), gt, 1.0), 1.0 - 2.0 / (g + 2.0));
}

TEST(ClassNllTest, ClampsAndDerivative) {
  const std::vector<double> p{0.5, 0.5};
  EXPECT_NEAR(class_nll(p, 0), std::log(2.0), 1e-15);
  EXPECT_NEAR(class_nll_derivative(p, 0), -2.0, 1e-15);
  const std::vector<double> zero{0.0, 1.0};
  EXPECT_NEAR(class_nll(zero, 0), -std::log(kProbEpsilon), 1e-9);
  EXPECT_EQ(class_nll_derivative(zero, 0), 0.0);
}

TEST(OverlapTest, HardVariant) {
  BinaryMask left(2, 2, {1, 0, 1, 0});
  BinaryMask right(2, 2, {0, 1, 0, 1});
  EXPECT_EQ(overlap_hard(from_binary(left), right), 0.0);
  EXPECT_EQ(overlap_hard(from_binary(left), left), 1.0);
  EXPECT_EQ(overlap_hard(constant(2, 2, 0.5), left), 0.5);
}

TEST(OverlapTest, SoftVariantOnKnownValues) {
  BinaryMask u(1, 2, {1, 0});
  SoftMask m{1, 2, {0.6, 0.2}};
  EXPECT_DOUBLE_EQ(overlap_soft(m, u), 0.6 / 1.2);
  EXPECT_EQ(overlap_soft(constant(1, 2, 0.0), BinaryMask(1, 2)), 0.0);
}

Prediction pred(std::vector<double> cls, SoftMask m) { return {std::move(cls), std::move(m)}; }

TEST(BackgroundTermTest, Examples) {
  const std::vector<Prediction> p{pred({0.0, 1.0}, constant(1, 1, 0.5)),
                                  pred({0.5, 0.5}, constant(1, 1, 0.5))};
  const std::vector<std::size_t> none;
  const std::vector<std::size_t> all{0, 1};
  EXPECT_EQ(l_cls(p, {}, all, 0.5), 0.0);
  EXPECT_NEAR(l_cls(std::span(p).first(1), {}, none, 0.5), 0.0, 1e-6);
  const std::vector<std::size_t> first{0};
  EXPECT_NEAR(l_cls(p, {}, first, 0.5), std::log(2.0), 1e-12);
  // Class 0 is silent and the prediction commits to it: no penalty.
  EXPECT_EQ(l_cls(p, {0}, first, 0.5), 0.0);
  EXPECT_NEAR(l_cls(p, {0}, first, 0.6), std::log(2.0), 1e-12);
}

TEST(MatchTest, ForcedAndZeroCost) {
  BinaryMask gt(2, 2, {1, 1, 0, 0});
  std::vector<Prediction> p{pred({0.5, 0.5}, constant(2, 2, 0.5))};
  const std::vector<GroundTruth> g{{0, gt}};
  EXPECT_EQ(match(p, g, {}), (std::vector<std::size_t>{0}));
  p.push_back(pred({1.0, 0.0}, from_binary(gt)));
  EXPECT_EQ(match(p, g, {}), (std::vector<std::size_t>{1}));
  EXPECT_THROW(match(std::span(p).first(0), g, {}), ValidationError);
}

TEST(MatchTest, CostMatchesBruteForce) {
  testing::Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto f = testing::random_soao_frame(rng, 4, 4, 3, 6, rng.between(1, 4));
    const SoaoConfig cfg;
    const auto cost = matching_cost(f.predictions, f.ground_truths, cfg);
    EXPECT_EQ(assignment_cost(cost, match(f.predictions, f.ground_truths, cfg)),
              testing::brute_force_assignment(cost).cost);
  }
}

TEST(SoaoTotalTest, WeightsZeroedGivesSegmentationTerm) {
  testing::Rng rng(4);
  const auto f = testing::random_soao_frame(rng, 4, 4, 2, 4, 2);
  SoaoConfig cfg;
  cfg.lambda_cls = 0.0;
  cfg.lambda_ins = 0.0;
  const auto b = soao_total(f, cfg);
  EXPECT_EQ(b.total, b.l_seg);
}

TEST(SoaoTotalTest, DecompositionIdentity) {
  testing::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const auto f = testing::random_soao_frame(rng, 5, 5, 3, 4, rng.between(0, 4));
    SoaoConfig cfg;
    cfg.lambda_cls = rng.uniform(0.0, 3.0);
    cfg.lambda_ins = rng.uniform(0.0, 3.0);
    const auto b = soao_total(f, cfg);
    EXPECT_EQ(b.total, b.l_seg + cfg.lambda_cls * b.l_cls + cfg.lambda_ins * b.l_ins);
  }
}

TEST(SoaoTotalTest, PerfectPredictionIsNearZero) {
  BinaryMask g0(3, 3, {1, 1, 0, 1, 1, 0, 0, 0, 0});
  BinaryMask g1(3, 3, {0, 0, 0, 0, 0, 1, 0, 1, 1});
  SoaoFrame f;
  f.predictions = {pred({1, 0, 0}, from_binary(g0)), pred({0, 1, 0}, from_binary(g1)),
                   pred({0, 0, 1}, constant(3, 3, 0.0))};
  f.ground_truths = {{0, g0}, {1, g1}};
  const auto b = soao_total(f, {});
  EXPECT_NEAR(b.total, 0.0, 1e-5);
  EXPECT_EQ(b.assignment, (std::vector<std::size_t>{0, 1}));
}

TEST(SoaoFrameTest, Validation) {
  SoaoFrame f;
  f.predictions = {pred({0.7, 0.7}, constant(1, 1, 0.5))};
  EXPECT_THROW(f.validate(), ValidationError);
  f.predictions = {pred({0.5, 0.5}, constant(1, 1, 1.5))};
  EXPECT_THROW(f.validate(), ValidationError);
  f.predictions = {pred({0.5, 0.5}, constant(1, 1, 0.5))};
  f.ground_truths = {{1, BinaryMask(1, 1)}};
  EXPECT_THROW(f.validate(), ValidationError);
  f.ground_truths = {{0, BinaryMask(1, 2)}};
  EXPECT_THROW(f.validate(), DimensionMismatch);
}

TEST(GradientCheckTest, EveryTermOnRandomFrames) {
  testing::Rng rng(12);
  for (int i = 0; i < 5; ++i) {
    const auto f = testing::random_soao_frame(rng, 8, 8, 3, 4, 2);
    for (LossTerm term : kAllLossTerms) {
      const auto c = finite_diff_check(term, f, {});
      EXPECT_LT(c.max_relative_error, 1e-4) << to_string(term);
    }
  }
}

TEST(GradientCheckTest, ZeroStepRejected) {
  testing::Rng rng(13);
  const auto f = testing::random_soao_frame(rng, 2, 2, 1, 1, 1);
  EXPECT_THROW(finite_diff_check(LossTerm::kFocal, f, {}, 0.0), ValidationError);
  EXPECT_THROW(finite_diff_check(LossTerm::kDice, f, {}, -1e-5), ValidationError);
}

TEST(GradientCheckTest, ClampedVariablesSkipped) {
  SoaoFrame f;
  f.predictions = {pred({0.5, 0.5}, {1, 2, {0.0, 0.4}})};
  f.ground_truths = {{0, BinaryMask(1, 2, {1, 0})}};
  const auto c = finite_diff_check(LossTerm::kFocal, f, {});
  EXPECT_EQ(c.checked, 1u);
  EXPECT_EQ(c.skipped, 1u);
}

TEST(LossTermTest, NamesRoundTrip) {
  for (LossTerm t : kAllLossTerms) EXPECT_EQ(loss_term_from_string(to_string(t)), t);
  EXPECT_THROW(loss_term_from_string("hinge"), ValidationError);
}

}  // namespace
}  // namespace avseg
