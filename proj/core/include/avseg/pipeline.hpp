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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "avseg/align.hpp"
#include "avseg/avis.hpp"
#include "avseg/avtree.hpp"
#include "avseg/io.hpp"
#include "avseg/metrics.hpp"
#include "avseg/soao.hpp"

namespace avseg {

/// Thresholds shared by the command-line front ends.
struct PipelineConfig {
  double tau_tag = 0.1;
  double iou_threshold = 0.5;
  double tau_sil = 0.5;
  double beta2 = kDefaultBeta2;

  /// Throws ValidationError if a threshold is outside [0, 1] or beta2 < 0.
  void validate() const;
};

/// Everything produced while turning one frame's candidates and audio tags
/// into sounding masks.
struct IntegrateReport {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<ScoredInstance> potential;  // after two-phase filtering
  TagAggregation audio;
  IntegrationResult result;
};

/// Candidates labeled "background" are dropped before filtering.
inline constexpr std::string_view kBackgroundLabel = "background";

/// two_phase_filter -> aggregate_tag_scores -> integrate.
IntegrateReport run_integrate(const AudioVisualTree& tree, const InstanceFrame& candidates,
                              const TagScoreVector& tags, const PipelineConfig& config);

/// JSON with sorted keys and 9 significant digits. Masks are re-encoded as RLE.
std::string integrate_report_to_json(const IntegrateReport& report, const PipelineConfig& config);

/// Parses a noise specification: a JSON object mapping tag name to
/// confidence. Throws ParseError / ValidationError when malformed.
TagScoreVector parse_noise_spec(std::string_view json_text);

/// Adds or overwrites the given tag confidences and leaves every other entry
/// untouched. With a tree, noise tags must exist in it unless listed in
/// `allowed_unknown`; otherwise a ValidationError is thrown.
TagScoreVector inject_noise(const TagScoreVector& tags, const TagScoreVector& noise,
                            const AudioVisualTree* tree = nullptr,
                            const std::vector<std::string>& allowed_unknown = {});

/// A named prediction/ground-truth pair of instance files.
struct EvalFrame {
  std::string name;
  InstanceFrame pred;
  InstanceFrame gt;
};

struct EvalReport {
  std::vector<std::string> names;
  DatasetEval summary;
  /// Mean Jaccard per label over the frames in which the label occurs.
  std::map<std::string, double> per_class_j;
};

/// Binarizes each side as the union of its instance masks, then evaluates.
EvalReport run_eval(const std::vector<EvalFrame>& frames, double beta2);
std::string eval_report_to_json(const EvalReport& report, double beta2);

struct LossCheckReport {
  SoaoBreakdown breakdown;
  std::vector<GradientCheck> checks;
  double step = 1e-5;
  double tolerance = 1e-4;
  bool passed = false;
};

/// Loss breakdown plus a finite-difference check of every loss term.
LossCheckReport run_loss_check(const SoaoFrame& frame, const SoaoConfig& config,
                               double step = 1e-5, double tolerance = 1e-4);
std::string loss_check_to_json(const LossCheckReport& report);

struct AlignReport {
  CanonicalNouns canonical;
  std::vector<std::string> silent;
};

/// Category vocabulary comes from the input when given, else from `tree`.
/// Throws ValidationError if neither is available.
AlignReport run_align(const AlignInput& input, const EmbeddingTable& embeddings,
                      const AudioVisualTree* tree = nullptr, AlignOptions options = {});
std::string align_report_to_json(const AlignReport& report);

/// Pairs `*.json` files of two directories by file name, sorted by name.
/// Throws ValidationError if a file of `primary` has no partner.
std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pair_by_basename(
    const std::filesystem::path& primary, const std::filesystem::path& secondary);

}  // namespace avseg
