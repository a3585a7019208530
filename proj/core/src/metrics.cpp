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

#include <cmath>
#include <set>

#include "avseg/error.hpp"

namespace avseg {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_beta2(double beta2) {
  if (!(beta2 >= 0.0) || !std::isfinite(beta2)) {
    throw ValidationError("beta2 must be finite and non-negative");
  }
}

BinaryMask label_union(const std::vector<ScoredInstance>& insts, const std::string& label,
                       std::size_t height, std::size_t width) {
  std::vector<BinaryMask> masks;
  for (const auto& i : insts) {
    if (i.label == label) masks.push_back(i.mask);
  }
  return union_of(masks, height, width);
}

}  // namespace

FrameEval evaluate_frame(const BinaryMask& pred, const BinaryMask& gt, double beta2) {
  check_beta2(beta2);
  require_same_shape(pred, gt);
  FrameEval e;
  const auto p = pred.bits();
  const auto g = gt.bits();
  for (std::size_t i = 0; i < p.size(); ++i) {
    e.tp += p[i] & g[i];
    e.fp += p[i] & (g[i] ^ 1);
    e.fn += (p[i] ^ 1) & g[i];
  }
  e.precision = ratio(e.tp, e.tp + e.fp);
  e.recall = ratio(e.tp, e.tp + e.fn);
  if (e.tp + e.fp + e.fn == 0) {
    e.j = 1.0;
    e.f = 1.0;
  } else {
    e.j = ratio(e.tp, e.tp + e.fp + e.fn);
    e.f = fscore_from(e.precision, e.recall, beta2);
  }
  return e;
}

double fscore_from(double precision, double recall, double beta2) {
  check_beta2(beta2);
  const double den = beta2 * precision + recall;
  if (den == 0.0) return 0.0;
  return (1.0 + beta2) * precision * recall / den;
}

double jaccard(const BinaryMask& pred, const BinaryMask& gt) {
  return evaluate_frame(pred, gt, kDefaultBeta2).j;
}

double fscore(const BinaryMask& pred, const BinaryMask& gt, double beta2) {
  return evaluate_frame(pred, gt, beta2).f;
}

DatasetEval evaluate_dataset(const std::vector<FramePair>& frames, double beta2) {
  if (frames.empty()) throw ValidationError("cannot evaluate an empty dataset");
  DatasetEval out;
  out.frames.reserve(frames.size());
  for (const auto& fr : frames) out.frames.push_back(evaluate_frame(fr.pred, fr.gt, beta2));
  for (const auto& e : out.frames) {
    out.mean_j += e.j;
    out.mean_f += e.f;
  }
  out.mean_j /= static_cast<double>(frames.size());
  out.mean_f /= static_cast<double>(frames.size());
  return out;
}

std::map<std::string, double> per_class_jaccard(const std::vector<ScoredInstance>& pred,
                                                const std::vector<ScoredInstance>& gt,
                                                std::size_t height, std::size_t width) {
  std::set<std::string> labels;
  for (const auto& i : pred) labels.insert(i.label);
  for (const auto& i : gt) labels.insert(i.label);
  std::map<std::string, double> out;
  for (const auto& label : labels) {
    out[label] = jaccard(label_union(pred, label, height, width),
                         label_union(gt, label, height, width));
  }
  return out;
}

}  // namespace avseg
