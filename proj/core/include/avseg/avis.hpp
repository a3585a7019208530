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

#include <span>
#include <string>
#include <vector>

#include "avseg/avtree.hpp"
#include "avseg/mask.hpp"

namespace avseg {

enum class MatchKind { kDirect, kSibling, kNone };

std::string_view to_string(MatchKind kind);

struct MatchRecord {
  std::string instance_label;
  std::string matched_category;  // empty when kind == kNone
  MatchKind kind = MatchKind::kNone;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

/// Partition of the potential-sounding set into sounding and silent objects,
/// plus one trace record per instance in processing order.
struct IntegrationResult {
  std::vector<ScoredInstance> sounding;
  std::vector<ScoredInstance> silent;
  std::vector<MatchRecord> trace;

  friend bool operator==(const IntegrationResult&, const IntegrationResult&) = default;
};

/// Matches instances against the audio-derived categories.
///
/// Instances are visited by descending confidence (ties: label, then input
/// position). An instance whose label is still present in the working copy of
/// `audio_categories` is sounding and consumes that category. Otherwise, if a
/// remaining category shares its group in `tree`, the highest-scoring such
/// sibling (lexicographically smallest on ties) is consumed and the instance
/// is sounding. All other instances, including labels unknown to the tree,
/// are silent.
IntegrationResult integrate(std::span<const ScoredInstance> instances,
                            const CategoryScoreMap& audio_categories,
                            const AudioVisualTree& tree);

}  // namespace avseg
