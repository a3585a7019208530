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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "avseg/error.hpp"

namespace avseg {

namespace {

void check_dims(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw ValidationError("mask dimensions must be at least 1x1, got " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
}

void check_confidence(const ScoredInstance& inst) {
  if (!(inst.confidence >= 0.0 && inst.confidence <= 1.0)) {
    throw ValidationError("confidence of instance '" + inst.label + "' is outside [0, 1]");
  }
}

}  // namespace

BinaryMask::BinaryMask(std::size_t height, std::size_t width)
    : height_(height), width_(width) {
  check_dims(height, width);
  bits_.assign(height * width, 0);
}

BinaryMask::BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  check_dims(height, width);
  if (bits_.size() != height * width) {
    throw ValidationError("mask data has " + std::to_string(bits_.size()) +
                          " pixels, expected " + std::to_string(height * width));
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ValidationError("mask data must contain only 0 and 1");
  }
}

BinaryMask BinaryMask::from_rle(std::size_t height, std::size_t width,
                                std::span<const std::uint64_t> counts) {
  check_dims(height, width);
  const std::uint64_t total = static_cast<std::uint64_t>(height) * width;
  std::vector<std::uint8_t> bits;
  bits.reserve(total);
  std::uint8_t value = 0;
  for (std::uint64_t run : counts) {
    if (run > total - bits.size()) {
      throw ValidationError("RLE runs exceed mask size " + std::to_string(total));
    }
    bits.insert(bits.end(), run, value);
    value ^= 1;
  }
  if (bits.size() != total) {
    throw ValidationError("RLE runs sum to " + std::to_string(bits.size()) + ", expected " +
                          std::to_string(total));
  }
  return BinaryMask(height, width, std::move(bits));
}

std::vector<std::uint64_t> BinaryMask::to_rle() const {
  std::vector<std::uint64_t> counts;
  std::uint8_t value = 0;
  std::uint64_t run = 0;
  for (std::uint8_t b : bits_) {
    if (b != value) {
      counts.push_back(run);
      run = 0;
      value = b;
    }
    ++run;
  }
  counts.push_back(run);
  return counts;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch("mask shapes differ: " + std::to_string(a.height()) + "x" +
                            std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                            "x" + std::to_string(b.width()));
  }
}

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n += x[i] & y[i];
  return n;
}

std::size_t union_count(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n += x[i] | y[i];
  return n;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  const std::size_t uni = union_count(a, b);
  if (uni == 0) return 0.0;
  return static_cast<double>(intersection_count(a, b)) / static_cast<double>(uni);
}

BinaryMask union_of(std::span<const BinaryMask> masks, std::size_t height, std::size_t width) {
  std::vector<std::uint8_t> bits(height * width, 0);
  BinaryMask shape(height, width);
  for (const auto& m : masks) {
    require_same_shape(shape, m);
    const auto src = m.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= src[i];
  }
  return BinaryMask(height, width, std::move(bits));
}

bool precedes(const ScoredInstance& a, std::size_t a_index, const ScoredInstance& b,
              std::size_t b_index) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.label != b.label) return a.label < b.label;
  return a_index < b_index;
}

std::vector<FilterSelection> two_phase_select(std::span<const ScoredInstance> candidates,
                                              double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ValidationError("IoU threshold must lie in [0, 1]");
  }
  for (const auto& c : candidates) {
    check_confidence(c);
    require_same_shape(candidates.front().mask, c.mask);
  }

  // Phase 1: best candidate per label.
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto [it, inserted] = best.try_emplace(candidates[i].label, i);
    if (!inserted && candidates[i].confidence > candidates[it->second].confidence) {
      it->second = i;
    }
  }

  std::vector<FilterSelection> kept;
  std::vector<bool> taken(candidates.size(), false);
  for (const auto& [label, idx] : best) {
    kept.push_back({idx, FilterPhase::kTopPerLabel});
    taken[idx] = true;
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_rank = [&](std::size_t a, std::size_t b) {
    return precedes(candidates[a], a, candidates[b], b);
  };
  std::sort(order.begin(), order.end(), by_rank);

  // Phase 2: IoU-gated admission against everything kept so far.
  for (std::size_t idx : order) {
    if (taken[idx]) continue;
    const bool admit = std::all_of(kept.begin(), kept.end(), [&](const FilterSelection& s) {
      return iou(candidates[idx].mask, candidates[s.input_index].mask) < iou_threshold;
    });
    if (admit) {
      kept.push_back({idx, FilterPhase::kIouAdmitted});
      taken[idx] = true;
    }
  }

  std::sort(kept.begin(), kept.end(), [&](const FilterSelection& a, const FilterSelection& b) {
    return by_rank(a.input_index, b.input_index);
  });
  return kept;
}

std::vector<ScoredInstance> two_phase_filter(std::span<const ScoredInstance> candidates,
                                             double iou_threshold) {
  std::vector<ScoredInstance> out;
  for (const auto& s : two_phase_select(candidates, iou_threshold)) {
    out.push_back(candidates[s.input_index]);
  }
  return out;
}

}  // namespace avseg
