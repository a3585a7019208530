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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avseg/error.hpp"

namespace avseg {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }
bool clamp_active(double p) { return p <= kProbEpsilon || p >= 1.0 - kProbEpsilon; }

void require_shape(const SoftMask& probs, const BinaryMask& gt) {
  if (!probs.same_shape(gt)) {
    throw DimensionMismatch("probability map " + std::to_string(probs.height) + "x" +
                            std::to_string(probs.width) + " does not match mask " +
                            std::to_string(gt.height()) + "x" + std::to_string(gt.width()));
  }
  if (probs.values.size() != probs.height * probs.width) {
    throw ValidationError("probability map has the wrong number of values");
  }
}

void check_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string(name) + " must be finite and non-negative");
  }
}

// Per-pixel focal term and its derivative w.r.t. the raw probability.
struct FocalPixel {
  double value;
  double derivative;
};

FocalPixel focal_pixel(double raw, bool positive, double gamma, double alpha) {
  const double p = clamp_prob(raw);
  FocalPixel out{};
  if (positive) {
    const double q = 1.0 - p;
    out.value = -alpha * std::pow(q, gamma) * std::log(p);
    out.derivative = alpha * (gamma * std::pow(q, gamma - 1.0) * std::log(p) - std::pow(q, gamma) / p);
  } else {
    const double q = 1.0 - p;  // probability of the true (background) pixel class
    out.value = -(1.0 - alpha) * std::pow(p, gamma) * std::log(q);
    out.derivative =
        -(1.0 - alpha) * (gamma * std::pow(p, gamma - 1.0) * std::log(q) - std::pow(p, gamma) / q);
  }
  if (clamp_active(raw)) out.derivative = 0.0;
  return out;
}

}  // namespace

void SoaoConfig::validate() const {
  check_finite_nonneg(lambda_focal, "lambda_focal");
  check_finite_nonneg(lambda_dice, "lambda_dice");
  check_finite_nonneg(lambda_cls, "lambda_cls");
  check_finite_nonneg(lambda_ins, "lambda_ins");
  check_finite_nonneg(focal_gamma, "focal_gamma");
  check_finite_nonneg(dice_smoothing, "dice_smoothing");
  if (!(focal_alpha >= 0.0 && focal_alpha <= 1.0)) {
    throw ValidationError("focal_alpha must lie in [0, 1]");
  }
  if (!(silent_threshold >= 0.0 && silent_threshold <= 1.0)) {
    throw ValidationError("silent_threshold must lie in [0, 1]");
  }
}

void SoaoFrame::validate() const {
  if (predictions.empty()) {
    if (!ground_truths.empty()) throw ValidationError("ground truth given without predictions");
    return;
  }
  const std::size_t width = predictions.front().class_probs.size();
  if (width < 2) throw ValidationError("class_probs needs at least one class plus background");
  const std::size_t h = predictions.front().mask.height;
  const std::size_t w = predictions.front().mask.width;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    const std::string where = "prediction " + std::to_string(i);
    if (p.class_probs.size() != width) {
      throw ValidationError(where + ": class_probs length differs from prediction 0");
    }
    double sum = 0.0;
    for (double v : p.class_probs) {
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(where + ": class probability outside [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError(where + ": class_probs do not sum to 1");
    if (p.mask.height != h || p.mask.width != w) {
      throw DimensionMismatch(where + ": mask shape differs from prediction 0");
    }
    if (h == 0 || w == 0 || p.mask.values.size() != h * w) {
      throw ValidationError(where + ": mask_probs has the wrong number of values");
    }
    for (double v : p.mask.values) {
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(where + ": mask probability outside [0, 1]");
    }
  }
  const std::size_t classes = width - 1;
  for (std::size_t j = 0; j < ground_truths.size(); ++j) {
    const auto& g = ground_truths[j];
    if (g.class_id >= classes) {
      throw ValidationError("ground truth " + std::to_string(j) + ": class_id out of range");
    }
    if (g.mask.height() != h || g.mask.width() != w) {
      throw DimensionMismatch("ground truth " + std::to_string(j) + ": mask shape differs");
    }
  }
  for (std::size_t s : silent_labels) {
    if (s >= classes) throw ValidationError("silent label " + std::to_string(s) + " out of range");
  }
}

double focal_loss(const SoftMask& probs, const BinaryMask& gt, double gamma, double alpha) {
  require_shape(probs, gt);
  const auto bits = gt.bits();
  double sum = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    sum += focal_pixel(probs.values[i], bits[i] != 0, gamma, alpha).value;
  }
  return sum / static_cast<double>(bits.size());
}

LossWithGrad focal_loss_grad(const SoftMask& probs, const BinaryMask& gt, double gamma,
                             double alpha) {
  require_shape(probs, gt);
  const auto bits = gt.bits();
  const double n = static_cast<double>(bits.size());
  LossWithGrad out;
  out.grad.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const auto px = focal_pixel(probs.values[i], bits[i] != 0, gamma, alpha);
    out.value += px.value;
    out.grad[i] = px.derivative / n;
  }
  out.value /= n;
  return out;
}

double dice_loss(const SoftMask& probs, const BinaryMask& gt, double smoothing) {
  return dice_loss_grad(probs, gt, smoothing).value;
}

LossWithGrad dice_loss_grad(const SoftMask& probs, const BinaryMask& gt, double smoothing) {
  require_shape(probs, gt);
  const auto bits = gt.bits();
  double inter = 0.0, psum = 0.0, gsum = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    inter += probs.values[i] * bits[i];
    psum += probs.values[i];
    gsum += bits[i];
  }
  const double num = 2.0 * (inter + smoothing);
  const double den = psum + gsum + 2.0 * smoothing;
  LossWithGrad out;
  out.grad.assign(bits.size(), 0.0);
  if (den == 0.0) return out;  // empty prediction and target without smoothing
  out.value = 1.0 - num / den;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.grad[i] = -(2.0 * bits[i] * den - num) / (den * den);
  }
  return out;
}

double class_nll(std::span<const double> class_probs, std::size_t class_id) {
  return -std::log(clamp_prob(class_probs[class_id]));
}

double class_nll_derivative(std::span<const double> class_probs, std::size_t class_id) {
  const double p = class_probs[class_id];
  if (clamp_active(p)) return 0.0;
  return -1.0 / p;
}

LossWithGrad overlap_soft_grad(const SoftMask& probs, const BinaryMask& gt_union) {
  require_shape(probs, gt_union);
  const auto bits = gt_union.bits();
  // With U binary and m in [0, 1]: min(m, U) = m * U and max(m, U) = U + m (1 - U).
  double inside = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double m = probs.values[i];
    if (bits[i]) {
      inside += std::min(m, 1.0);
      outer += std::max(m, 1.0);
    } else {
      inside += std::min(m, 0.0);
      outer += std::max(m, 0.0);
    }
  }
  LossWithGrad out;
  out.grad.assign(bits.size(), 0.0);
  if (outer == 0.0) return out;
  out.value = inside / outer;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.grad[i] = bits[i] ? 1.0 / outer : -inside / (outer * outer);
  }
  return out;
}

double overlap_soft(const SoftMask& probs, const BinaryMask& gt_union) {
  return overlap_soft_grad(probs, gt_union).value;
}

double overlap_hard(const SoftMask& probs, const BinaryMask& gt_union) {
  require_shape(probs, gt_union);
  std::vector<std::uint8_t> bits(probs.values.size());
  std::transform(probs.values.begin(), probs.values.end(), bits.begin(),
                 [](double v) { return v >= 0.5 ? 1 : 0; });
  return iou(BinaryMask(probs.height, probs.width, std::move(bits)), gt_union);
}

CostMatrix matching_cost(std::span<const Prediction> preds, std::span<const GroundTruth> gts,
                         const SoaoConfig& cfg) {
  CostMatrix cost(gts.size(), preds.size());
  for (std::size_t j = 0; j < gts.size(); ++j) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto& p = preds[i];
      cost(j, i) = cfg.lambda_focal * focal_loss(p.mask, gts[j].mask, cfg.focal_gamma, cfg.focal_alpha) +
                   cfg.lambda_dice * dice_loss(p.mask, gts[j].mask, cfg.dice_smoothing) +
                   class_nll(p.class_probs, gts[j].class_id);
    }
  }
  return cost;
}

std::vector<std::size_t> match(std::span<const Prediction> preds,
                               std::span<const GroundTruth> gts, const SoaoConfig& cfg) {
  if (preds.size() < gts.size()) {
    throw ValidationError("matching needs at least as many predictions (" +
                          std::to_string(preds.size()) + ") as ground truths (" +
                          std::to_string(gts.size()) + ")");
  }
  return solve_assignment(matching_cost(preds, gts, cfg));
}

std::vector<std::size_t> unmatched_indices(std::size_t num_predictions,
                                           std::span<const std::size_t> matched) {
  std::vector<bool> used(num_predictions, false);
  for (std::size_t i : matched) {
    if (i < num_predictions) used[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < num_predictions; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

bool aligns_with_silent(const Prediction& pred, const std::set<std::size_t>& silent_labels,
                        double silent_threshold) {
  const std::size_t classes = pred.background_index();
  if (classes == 0) return false;
  const auto begin = pred.class_probs.begin();
  const auto best = std::max_element(begin, begin + static_cast<std::ptrdiff_t>(classes));
  const auto cls = static_cast<std::size_t>(best - begin);
  return silent_labels.contains(cls) && *best >= silent_threshold;
}

double l_cls(std::span<const Prediction> preds, const std::set<std::size_t>& silent_labels,
             std::span<const std::size_t> matched, double silent_threshold) {
  double sum = 0.0;
  for (std::size_t j : unmatched_indices(preds.size(), matched)) {
    if (aligns_with_silent(preds[j], silent_labels, silent_threshold)) continue;
    sum += class_nll(preds[j].class_probs, preds[j].background_index());
  }
  return sum;
}

double l_ins(std::span<const Prediction> preds, std::span<const GroundTruth> gts,
             std::span<const std::size_t> matched, OverlapMode mode) {
  if (gts.empty()) return 0.0;
  std::vector<BinaryMask> masks;
  masks.reserve(gts.size());
  for (const auto& g : gts) masks.push_back(g.mask);
  const BinaryMask gt_union = union_of(masks, masks.front().height(), masks.front().width());
  double sum = 0.0;
  for (std::size_t j : unmatched_indices(preds.size(), matched)) {
    sum += mode == OverlapMode::kSoft ? overlap_soft(preds[j].mask, gt_union)
                                      : overlap_hard(preds[j].mask, gt_union);
  }
  return sum;
}

SoaoBreakdown soao_total(const SoaoFrame& frame, const SoaoConfig& cfg) {
  cfg.validate();
  frame.validate();
  const auto& preds = frame.predictions;
  const auto& gts = frame.ground_truths;

  SoaoBreakdown out;
  out.assignment = match(preds, gts, cfg);
  for (std::size_t j = 0; j < gts.size(); ++j) {
    const Prediction& p = preds[out.assignment[j]];
    out.l_seg += cfg.lambda_focal * focal_loss(p.mask, gts[j].mask, cfg.focal_gamma, cfg.focal_alpha) +
                 cfg.lambda_dice * dice_loss(p.mask, gts[j].mask, cfg.dice_smoothing) +
                 class_nll(p.class_probs, gts[j].class_id);
  }
  out.l_cls = l_cls(preds, frame.silent_labels, out.assignment, cfg.silent_threshold);
  out.l_ins = l_ins(preds, gts, out.assignment, OverlapMode::kSoft);
  out.l_ins_hard = l_ins(preds, gts, out.assignment, OverlapMode::kHard);
  out.total = out.l_seg + cfg.lambda_cls * out.l_cls + cfg.lambda_ins * out.l_ins;
  return out;
}

}  // namespace avseg
