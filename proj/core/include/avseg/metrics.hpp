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
#include <map>
#include <string>
#include <vector>

#include "avseg/mask.hpp"

namespace avseg {

inline constexpr double kDefaultBeta2 = 0.3;

/// Pixel-level agreement between one predicted and one ground-truth mask.
struct FrameEval {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double j = 0.0;
  double f = 0.0;
};

/// Jaccard index; 1 when both masks are empty.
double jaccard(const BinaryMask& pred, const BinaryMask& gt);

/// (1 + b2) P R / (b2 P + R). Precision and recall are 0 when their
/// denominators vanish; F is 0 when both are 0 and 1 when both masks are
/// empty. Throws ValidationError if beta2 < 0.
double fscore(const BinaryMask& pred, const BinaryMask& gt, double beta2 = kDefaultBeta2);

/// F from precision and recall alone.
double fscore_from(double precision, double recall, double beta2);

FrameEval evaluate_frame(const BinaryMask& pred, const BinaryMask& gt,
                         double beta2 = kDefaultBeta2);

struct FramePair {
  BinaryMask pred;
  BinaryMask gt;
};

struct DatasetEval {
  double mean_j = 0.0;
  double mean_f = 0.0;
  std::vector<FrameEval> frames;
};

/// Unweighted mean of per-frame J and F. Throws ValidationError on an empty list.
DatasetEval evaluate_dataset(const std::vector<FramePair>& frames, double beta2 = kDefaultBeta2);

/// Per-class Jaccard for labeled instance sets: for every label present in
/// either side, the Jaccard of the union of that label's masks.
std::map<std::string, double> per_class_jaccard(const std::vector<ScoredInstance>& pred,
                                                const std::vector<ScoredInstance>& gt,
                                                std::size_t height, std::size_t width);

}  // namespace avseg
