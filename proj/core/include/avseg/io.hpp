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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avseg/avtree.hpp"
#include "avseg/mask.hpp"
#include "avseg/soao.hpp"

namespace avseg {

/// Contents of an instance file:
///
///     { "height": H, "width": W,
///       "instances": [ { "label": str, "confidence": num, "mask_rle": [...] } ] }
///
/// `mask_rle` holds row-major alternating run lengths starting with a 0-run.
struct InstanceFrame {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<ScoredInstance> instances;
};

/// Reads an instance file. Files written by `integrate` are accepted too; their
/// `sounding` list is read as the instances. Throws ParseError on malformed
/// JSON (with line and column) and ValidationError naming the JSON pointer of
/// the first schema violation.
InstanceFrame parse_instance_frame(std::string_view json_text);
std::string instance_frame_to_json(const InstanceFrame& frame);

/// JSON object mapping tag name to a confidence in [0, 1].
TagScoreVector parse_tag_scores(std::string_view json_text);
/// Values are written at full precision so that untouched entries survive
/// a read/write cycle unchanged.
std::string tag_scores_to_json(const TagScoreVector& scores);

/// Loss-check frame:
///
///     { "height": H, "width": W,
///       "predictions": [ { "class_probs": [C+1 nums], "mask_probs": [H*W nums] } ],
///       "ground_truths": [ { "class_id": k, "mask_rle": [...] } ],
///       "silent_labels": [ids],
///       "config": { "lambda_focal": .., ... } }   // optional overrides
struct LossCheckInput {
  SoaoFrame frame;
  SoaoConfig config;
};
LossCheckInput parse_loss_check_input(std::string_view json_text);

/// Alignment frame: { "nouns": [...], "sounding": [...], "categories": [...] }.
/// `categories` is optional; callers may fall back to a tree's category layer.
struct AlignInput {
  std::vector<std::string> nouns;
  std::vector<std::string> sounding;
  std::optional<std::vector<std::string>> categories;
};
AlignInput parse_align_input(std::string_view json_text);

/// Throws IoError if the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);
/// Creates missing parent directories. Throws IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace avseg
