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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace avseg {

/// Dense H x W binary mask, row-major, one byte per pixel (0 or 1).
class BinaryMask {
 public:
  /// All-zero mask. Throws ValidationError if either dimension is zero.
  BinaryMask(std::size_t height, std::size_t width);

  /// Takes ownership of `bits`; every entry must be 0 or 1 and the length
  /// must equal height * width.
  BinaryMask(std::size_t height, std::size_t width, std::vector<std::uint8_t> bits);

  /// Decodes row-major alternating run lengths that start with a 0-run.
  static BinaryMask from_rle(std::size_t height, std::size_t width,
                             std::span<const std::uint64_t> counts);

  /// Inverse of from_rle. The first run is always a (possibly empty) 0-run.
  std::vector<std::uint64_t> to_rle() const;

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool value = true) {
    bits_[row * width_ + col] = value ? 1 : 0;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// Number of foreground pixels.
  std::size_t count() const noexcept;
  bool is_empty() const noexcept { return count() == 0; }

  bool same_shape(const BinaryMask& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

/// A labeled candidate object produced by the segmentation stage.
struct ScoredInstance {
  std::string label;
  double confidence = 0.0;
  BinaryMask mask;

  friend bool operator==(const ScoredInstance&, const ScoredInstance&) = default;
};

/// Throws DimensionMismatch unless both masks have the same height and width.
void require_same_shape(const BinaryMask& a, const BinaryMask& b);

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b);
std::size_t union_count(const BinaryMask& a, const BinaryMask& b);

/// |a & b| / |a | b|; 0 when both masks are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

/// Pixelwise OR. An empty list yields an all-zero mask of the given size.
BinaryMask union_of(std::span<const BinaryMask> masks, std::size_t height, std::size_t width);

enum class FilterPhase { kTopPerLabel, kIouAdmitted };

/// One kept candidate of the two-phase filter, referring back to its input.
struct FilterSelection {
  std::size_t input_index;
  FilterPhase phase;

  friend bool operator==(const FilterSelection&, const FilterSelection&) = default;
};

/// Phase 1 keeps the single highest-confidence candidate of every label
/// (lowest input index on ties). Phase 2 visits the remaining candidates in
/// descending confidence (ties: label, then input index) and admits one iff
/// its IoU with every mask kept so far is strictly below `iou_threshold`.
///
/// The result follows `precedes`.
std::vector<FilterSelection> two_phase_select(std::span<const ScoredInstance> candidates,
                                              double iou_threshold);

/// Same as two_phase_select but returns copies of the kept instances.
std::vector<ScoredInstance> two_phase_filter(std::span<const ScoredInstance> candidates,
                                             double iou_threshold);

/// Canonical processing order shared by the filter and the integration step:
/// descending confidence, ties broken by label and then by position.
bool precedes(const ScoredInstance& a, std::size_t a_index, const ScoredInstance& b,
              std::size_t b_index);

}  // namespace avseg
