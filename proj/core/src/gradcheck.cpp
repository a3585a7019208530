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

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "avseg/error.hpp"
#include "avseg/soao.hpp"

namespace avseg {

namespace {

constexpr double kRelativeFloor = 1e-8;

// A scalar loss over a mutable frame plus the analytic gradient w.r.t. a list
// of variables inside that frame.
struct TermProblem {
  std::vector<double*> variables;
  std::vector<double> analytic;
  std::function<double()> evaluate;
};

BinaryMask gt_union(const SoaoFrame& frame) {
  std::vector<BinaryMask> masks;
  for (const auto& g : frame.ground_truths) masks.push_back(g.mask);
  return union_of(masks, masks.front().height(), masks.front().width());
}

TermProblem build_problem(LossTerm term, SoaoFrame& frame, const SoaoConfig& cfg,
                          const std::vector<std::size_t>& assignment) {
  TermProblem pb;
  auto& preds = frame.predictions;
  const auto& gts = frame.ground_truths;

  switch (term) {
    case LossTerm::kFocal:
    case LossTerm::kDice: {
      const bool focal = term == LossTerm::kFocal;
      for (std::size_t j = 0; j < gts.size(); ++j) {
        Prediction& p = preds[assignment[j]];
        const auto g = focal ? focal_loss_grad(p.mask, gts[j].mask, cfg.focal_gamma, cfg.focal_alpha)
                             : dice_loss_grad(p.mask, gts[j].mask, cfg.dice_smoothing);
        for (std::size_t k = 0; k < p.mask.values.size(); ++k) {
          pb.variables.push_back(&p.mask.values[k]);
          pb.analytic.push_back(g.grad[k]);
        }
      }
      pb.evaluate = [&preds, &gts, &cfg, &assignment, focal] {
        double sum = 0.0;
        for (std::size_t j = 0; j < gts.size(); ++j) {
          const Prediction& p = preds[assignment[j]];
          sum += focal ? focal_loss(p.mask, gts[j].mask, cfg.focal_gamma, cfg.focal_alpha)
                       : dice_loss(p.mask, gts[j].mask, cfg.dice_smoothing);
        }
        return sum;
      };
      break;
    }
    case LossTerm::kCrossEntropy: {
      for (std::size_t j = 0; j < gts.size(); ++j) {
        Prediction& p = preds[assignment[j]];
        pb.variables.push_back(&p.class_probs[gts[j].class_id]);
        pb.analytic.push_back(class_nll_derivative(p.class_probs, gts[j].class_id));
      }
      pb.evaluate = [&preds, &gts, &assignment] {
        double sum = 0.0;
        for (std::size_t j = 0; j < gts.size(); ++j) {
          sum += class_nll(preds[assignment[j]].class_probs, gts[j].class_id);
        }
        return sum;
      };
      break;
    }
    case LossTerm::kInstanceOverlap: {
      if (gts.empty()) {
        pb.evaluate = [] { return 0.0; };
        break;
      }
      auto uni = std::make_shared<BinaryMask>(gt_union(frame));
      const auto idle = unmatched_indices(preds.size(), assignment);
      for (std::size_t j : idle) {
        const auto g = overlap_soft_grad(preds[j].mask, *uni);
        for (std::size_t k = 0; k < preds[j].mask.values.size(); ++k) {
          pb.variables.push_back(&preds[j].mask.values[k]);
          pb.analytic.push_back(g.grad[k]);
        }
      }
      pb.evaluate = [&preds, uni, idle] {
        double sum = 0.0;
        for (std::size_t j : idle) sum += overlap_soft(preds[j].mask, *uni);
        return sum;
      };
      break;
    }
    case LossTerm::kBackground: {
      // Silent alignment is decided once at the unperturbed point.
      std::vector<std::size_t> counted;
      for (std::size_t j : unmatched_indices(preds.size(), assignment)) {
        if (!aligns_with_silent(preds[j], frame.silent_labels, cfg.silent_threshold)) {
          counted.push_back(j);
        }
      }
      for (std::size_t j : counted) {
        Prediction& p = preds[j];
        pb.variables.push_back(&p.class_probs[p.background_index()]);
        pb.analytic.push_back(class_nll_derivative(p.class_probs, p.background_index()));
      }
      pb.evaluate = [&preds, counted] {
        double sum = 0.0;
        for (std::size_t j : counted) {
          sum += class_nll(preds[j].class_probs, preds[j].background_index());
        }
        return sum;
      };
      break;
    }
  }
  return pb;
}

}  // namespace

std::string_view to_string(LossTerm term) {
  switch (term) {
    case LossTerm::kFocal:
      return "focal";
    case LossTerm::kDice:
      return "dice";
    case LossTerm::kCrossEntropy:
      return "cross_entropy";
    case LossTerm::kInstanceOverlap:
      return "instance_overlap";
    case LossTerm::kBackground:
      return "background";
  }
  return "unknown";
}

LossTerm loss_term_from_string(std::string_view name) {
  for (LossTerm t : kAllLossTerms) {
    if (to_string(t) == name) return t;
  }
  throw ValidationError("unknown loss term '" + std::string(name) + "'");
}

GradientCheck finite_diff_check(LossTerm term, const SoaoFrame& frame, const SoaoConfig& cfg,
                                double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError("finite-difference step must be positive and finite");
  }
  cfg.validate();
  frame.validate();

  SoaoFrame work = frame;
  const auto assignment = match(work.predictions, work.ground_truths, cfg);
  TermProblem pb = build_problem(term, work, cfg, assignment);

  GradientCheck report;
  report.term = term;
  for (std::size_t k = 0; k < pb.variables.size(); ++k) {
    double& x = *pb.variables[k];
    const double x0 = x;
    if (x0 - step <= kProbEpsilon || x0 + step >= 1.0 - kProbEpsilon) {
      ++report.skipped;
      continue;
    }
    x = x0 + step;
    const double up = pb.evaluate();
    x = x0 - step;
    const double down = pb.evaluate();
    x = x0;

    const double numeric = (up - down) / (2.0 * step);
    const double analytic = pb.analytic[k];
    if (!std::isfinite(numeric) || !std::isfinite(analytic)) {
      throw ValidationError("non-finite gradient encountered while checking " +
                            std::string(to_string(term)));
    }
    const double scale = std::max({std::abs(analytic), std::abs(numeric), kRelativeFloor});
    report.max_relative_error = std::max(report.max_relative_error, std::abs(analytic - numeric) / scale);
    ++report.checked;
  }
  return report;
}

}  // namespace avseg
