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

#include "avseg/avis.hpp"

#include <algorithm>
#include <numeric>

namespace avseg {

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::kDirect:
      return "direct";
    case MatchKind::kSibling:
      return "sibling";
    case MatchKind::kNone:
      break;
  }
  return "none";
}

IntegrationResult integrate(std::span<const ScoredInstance> instances,
                            const CategoryScoreMap& audio_categories,
                            const AudioVisualTree& tree) {
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return precedes(instances[a], a, instances[b], b);
  });

  CategoryScoreMap remaining = audio_categories;
  IntegrationResult result;
  for (std::size_t idx : order) {
    const ScoredInstance& inst = instances[idx];
    MatchRecord rec{inst.label, {}, MatchKind::kNone};

    if (auto it = remaining.find(inst.label); it != remaining.end()) {
      rec.kind = MatchKind::kDirect;
      rec.matched_category = it->first;
      remaining.erase(it);
    } else if (tree.has_category(inst.label)) {
      // Map iteration is lexicographic, so keeping the first strict maximum
      // resolves score ties toward the smaller name.
      auto chosen = remaining.end();
      for (auto cand = remaining.begin(); cand != remaining.end(); ++cand) {
        if (!tree.are_siblings(inst.label, cand->first)) continue;
        if (chosen == remaining.end() || cand->second > chosen->second) chosen = cand;
      }
      if (chosen != remaining.end()) {
        rec.kind = MatchKind::kSibling;
        rec.matched_category = chosen->first;
        remaining.erase(chosen);
      }
    }

    (rec.kind == MatchKind::kNone ? result.silent : result.sounding).push_back(inst);
    result.trace.push_back(std::move(rec));
  }
  return result;
}

}  // namespace avseg
