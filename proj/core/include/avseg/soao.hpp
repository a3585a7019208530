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

#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "avseg/assignment.hpp"
#include "avseg/mask.hpp"

namespace avseg {

/// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before any log.
inline constexpr double kProbEpsilon = 1e-7;

/// Per-pixel foreground probabilities, row-major.
struct SoftMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  bool same_shape(const BinaryMask& m) const noexcept {
    return height == m.height() && width == m.width();
  }
};

/// One query of the segmentation model. `class_probs` has C + 1 entries, the
/// last one being the "no object" class.
struct Prediction {
  std::vector<double> class_probs;
  SoftMask mask;

  std::size_t background_index() const noexcept { return class_probs.size() - 1; }
};

struct GroundTruth {
  std::size_t class_id = 0;  // in [0, C)
  BinaryMask mask;
};

struct SoaoConfig {
  double lambda_focal = 20.0;
  double lambda_dice = 1.0;
  double lambda_cls = 1.0;
  double lambda_ins = 1.0;
  double focal_gamma = 2.0;
  double focal_alpha = 0.25;
  double silent_threshold = 0.5;
  double dice_smoothing = 1.0;

  /// Throws ValidationError on negative or non-finite weights, or on a
  /// silent threshold outside [0, 1].
  void validate() const;
};

/// Predictions and ground truth for one frame plus the class ids of objects
/// known to be present but silent.
struct SoaoFrame {
  std::vector<Prediction> predictions;
  std::vector<GroundTruth> ground_truths;
  std::set<std::size_t> silent_labels;

  std::size_t num_classes() const noexcept {
    return predictions.empty() ? 0 : predictions.front().class_probs.size() - 1;
  }

  /// Checks shapes and value ranges; class probabilities must sum to 1 within
  /// 1e-9. Throws ValidationError / DimensionMismatch.
  void validate() const;
};

/// Loss value together with its gradient w.r.t. every input probability.
struct LossWithGrad {
  double value = 0.0;
  std::vector<double> grad;
};

/// Mean over pixels of -a_t (1 - p_t)^gamma log p_t.
double focal_loss(const SoftMask& probs, const BinaryMask& gt, double gamma, double alpha);
LossWithGrad focal_loss_grad(const SoftMask& probs, const BinaryMask& gt, double gamma,
                             double alpha);

/// 1 - 2 (sum(p g) + s) / (sum(p) + s + sum(g) + s), with smoothing s.
double dice_loss(const SoftMask& probs, const BinaryMask& gt, double smoothing = 1.0);
LossWithGrad dice_loss_grad(const SoftMask& probs, const BinaryMask& gt, double smoothing = 1.0);

/// -log p[class_id] with clamping.
double class_nll(std::span<const double> class_probs, std::size_t class_id);
/// d/dp[class_id] of class_nll; zero where the clamp is active.
double class_nll_derivative(std::span<const double> class_probs, std::size_t class_id);

/// Soft overlap of a predicted mask with the binary ground-truth union:
/// sum(min(m, U)) / sum(max(m, U)); 0 when the denominator vanishes.
double overlap_soft(const SoftMask& probs, const BinaryMask& gt_union);
LossWithGrad overlap_soft_grad(const SoftMask& probs, const BinaryMask& gt_union);

/// Exact binary IoU after thresholding the prediction at 0.5 (p >= 0.5 is on).
double overlap_hard(const SoftMask& probs, const BinaryMask& gt_union);

/// Pairwise matching cost: lambda_f * focal + lambda_d * dice - log p(class).
/// Rows are ground truths, columns predictions.
CostMatrix matching_cost(std::span<const Prediction> preds, std::span<const GroundTruth> gts,
                         const SoaoConfig& cfg);

/// Optimal injective assignment ground-truth index -> prediction index.
/// Throws ValidationError if there are fewer predictions than ground truths.
std::vector<std::size_t> match(std::span<const Prediction> preds,
                               std::span<const GroundTruth> gts, const SoaoConfig& cfg);

/// Prediction indices not present in `matched`, ascending.
std::vector<std::size_t> unmatched_indices(std::size_t num_predictions,
                                           std::span<const std::size_t> matched);

/// Whether an unmatched prediction is attributed to a known silent object:
/// its most likely non-background class is in `silent_labels` with
/// probability >= `silent_threshold`.
bool aligns_with_silent(const Prediction& pred, const std::set<std::size_t>& silent_labels,
                        double silent_threshold);

/// Background classification term summed over unmatched predictions that are
/// not aligned with a silent object.
double l_cls(std::span<const Prediction> preds, const std::set<std::size_t>& silent_labels,
             std::span<const std::size_t> matched, double silent_threshold);

enum class OverlapMode { kSoft, kHard };

/// Overlap of every unmatched prediction with the union of ground-truth masks.
/// Zero when there is no ground truth.
double l_ins(std::span<const Prediction> preds, std::span<const GroundTruth> gts,
             std::span<const std::size_t> matched, OverlapMode mode = OverlapMode::kSoft);

struct SoaoBreakdown {
  std::vector<std::size_t> assignment;  // ground truth -> prediction
  double l_seg = 0.0;
  double l_cls = 0.0;
  double l_ins = 0.0;      // soft form, enters the total
  double l_ins_hard = 0.0; // evaluation form, reported only
  double total = 0.0;      // l_seg + lambda_cls * l_cls + lambda_ins * l_ins
};

SoaoBreakdown soao_total(const SoaoFrame& frame, const SoaoConfig& cfg);

// ---------------------------------------------------------------------------
// Gradient verification.

enum class LossTerm { kFocal, kDice, kCrossEntropy, kInstanceOverlap, kBackground };

std::string_view to_string(LossTerm term);
/// Accepts the names produced by to_string. Throws ValidationError otherwise.
LossTerm loss_term_from_string(std::string_view name);

inline constexpr LossTerm kAllLossTerms[] = {LossTerm::kFocal, LossTerm::kDice,
                                             LossTerm::kCrossEntropy,
                                             LossTerm::kInstanceOverlap, LossTerm::kBackground};

struct GradientCheck {
  LossTerm term = LossTerm::kFocal;
  double max_relative_error = 0.0;
  std::size_t checked = 0;  // variables compared
  std::size_t skipped = 0;  // variables within `step` of a clamp or domain edge
};

/// Compares the analytic gradient of one loss term against central
/// differences over every probability the term depends on, holding the
/// matching fixed. Relative error is |a - n| / max(|a|, |n|, 1e-8).
/// Throws ValidationError for a non-positive step or non-finite values.
GradientCheck finite_diff_check(LossTerm term, const SoaoFrame& frame, const SoaoConfig& cfg,
                                double step = 1e-5);

}  // namespace avseg
