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

#include "avseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_support.hpp"

namespace avseg {

using detail::Json;
using detail::round9;

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

Json instance_json(const ScoredInstance& inst) {
  return {{"label", inst.label},
          {"confidence", round9(inst.confidence)},
          {"mask_rle", inst.mask.to_rle()}};
}

Json instances_json(const std::vector<ScoredInstance>& insts) {
  Json arr = Json::array();
  for (const auto& i : insts) arr.push_back(instance_json(i));
  return arr;
}

BinaryMask binarize(const InstanceFrame& frame) {
  std::vector<BinaryMask> masks;
  for (const auto& i : frame.instances) masks.push_back(i.mask);
  return union_of(masks, frame.height, frame.width);
}

}  // namespace

void PipelineConfig::validate() const {
  check_unit(tau_tag, "tau_tag");
  check_unit(iou_threshold, "iou_threshold");
  check_unit(tau_sil, "tau_sil");
  if (!(beta2 >= 0.0) || !std::isfinite(beta2)) throw ValidationError("beta2 must be non-negative");
}

IntegrateReport run_integrate(const AudioVisualTree& tree, const InstanceFrame& candidates,
                              const TagScoreVector& tags, const PipelineConfig& config) {
  config.validate();
  validate_tag_scores(tags);
  std::vector<ScoredInstance> objects;
  for (const auto& inst : candidates.instances) {
    if (inst.label != kBackgroundLabel) objects.push_back(inst);
  }

  IntegrateReport report;
  report.height = candidates.height;
  report.width = candidates.width;
  report.potential = two_phase_filter(objects, config.iou_threshold);
  report.audio = aggregate_tag_scores(tree, tags, config.tau_tag);
  report.result = integrate(report.potential, report.audio.categories, tree);
  return report;
}

std::string integrate_report_to_json(const IntegrateReport& report, const PipelineConfig& config) {
  Json doc;
  doc["height"] = report.height;
  doc["width"] = report.width;
  doc["config"] = {{"tau_tag", round9(config.tau_tag)},
                   {"iou_threshold", round9(config.iou_threshold)}};
  Json cats = Json::object();
  for (const auto& [name, score] : report.audio.categories) cats[name] = round9(score);
  doc["audio_categories"] = std::move(cats);
  doc["unknown_tags"] = report.audio.unknown_tags;
  doc["potential"] = instances_json(report.potential);
  doc["sounding"] = instances_json(report.result.sounding);
  doc["silent"] = instances_json(report.result.silent);
  Json trace = Json::array();
  for (const auto& rec : report.result.trace) {
    trace.push_back({{"instance_label", rec.instance_label},
                     {"matched_category", rec.matched_category},
                     {"kind", std::string(to_string(rec.kind))}});
  }
  doc["trace"] = std::move(trace);
  return detail::dump(doc);
}

TagScoreVector parse_noise_spec(std::string_view json_text) {
  return parse_tag_scores(json_text);
}

TagScoreVector inject_noise(const TagScoreVector& tags, const TagScoreVector& noise,
                            const AudioVisualTree* tree,
                            const std::vector<std::string>& allowed_unknown) {
  validate_tag_scores(noise);
  const std::set<std::string> allowed(allowed_unknown.begin(), allowed_unknown.end());
  TagScoreVector out = tags;
  for (const auto& [tag, conf] : noise) {
    if (tree && !tree->find_tag(tag) && !allowed.contains(tag)) {
      throw ValidationError("noise tag '" + tag + "' is not in the tree");
    }
    out[tag] = conf;
  }
  return out;
}

EvalReport run_eval(const std::vector<EvalFrame>& frames, double beta2) {
  if (frames.empty()) throw ValidationError("no frames to evaluate");
  EvalReport report;
  std::vector<FramePair> pairs;
  std::map<std::string, std::pair<double, std::size_t>> per_class;
  for (const auto& fr : frames) {
    if (fr.pred.height != fr.gt.height || fr.pred.width != fr.gt.width) {
      throw DimensionMismatch("frame '" + fr.name + "': prediction and ground truth sizes differ");
    }
    report.names.push_back(fr.name);
    pairs.push_back({binarize(fr.pred), binarize(fr.gt)});
    for (const auto& [label, j] :
         per_class_jaccard(fr.pred.instances, fr.gt.instances, fr.gt.height, fr.gt.width)) {
      auto& acc = per_class[label];
      acc.first += j;
      acc.second += 1;
    }
  }
  report.summary = evaluate_dataset(pairs, beta2);
  for (const auto& [label, acc] : per_class) {
    report.per_class_j[label] = acc.first / static_cast<double>(acc.second);
  }
  return report;
}

std::string eval_report_to_json(const EvalReport& report, double beta2) {
  Json doc;
  doc["beta2"] = round9(beta2);
  doc["mean_j"] = round9(report.summary.mean_j);
  doc["mean_f"] = round9(report.summary.mean_f);
  doc["num_frames"] = report.summary.frames.size();
  Json frames = Json::array();
  for (std::size_t i = 0; i < report.summary.frames.size(); ++i) {
    const auto& e = report.summary.frames[i];
    frames.push_back({{"name", report.names[i]},
                      {"j", round9(e.j)},
                      {"f", round9(e.f)},
                      {"precision", round9(e.precision)},
                      {"recall", round9(e.recall)},
                      {"tp", e.tp},
                      {"fp", e.fp},
                      {"fn", e.fn}});
  }
  doc["frames"] = std::move(frames);
  Json per_class = Json::object();
  for (const auto& [label, j] : report.per_class_j) per_class[label] = round9(j);
  doc["per_class_j"] = std::move(per_class);
  return detail::dump(doc);
}

LossCheckReport run_loss_check(const SoaoFrame& frame, const SoaoConfig& config, double step,
                               double tolerance) {
  LossCheckReport report;
  report.step = step;
  report.tolerance = tolerance;
  report.breakdown = soao_total(frame, config);
  report.passed = true;
  for (LossTerm term : kAllLossTerms) {
    report.checks.push_back(finite_diff_check(term, frame, config, step));
    if (!(report.checks.back().max_relative_error < tolerance)) report.passed = false;
  }
  return report;
}

std::string loss_check_to_json(const LossCheckReport& report) {
  Json doc;
  const auto& b = report.breakdown;
  doc["breakdown"] = {{"l_seg", round9(b.l_seg)},
                      {"l_cls", round9(b.l_cls)},
                      {"l_ins", round9(b.l_ins)},
                      {"l_ins_hard", round9(b.l_ins_hard)},
                      {"total", round9(b.total)}};
  doc["assignment"] = b.assignment;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"term", std::string(to_string(c.term))},
                      {"max_relative_error", round9(c.max_relative_error)},
                      {"checked", c.checked},
                      {"skipped", c.skipped},
                      {"passed", c.max_relative_error < report.tolerance}});
  }
  doc["gradient_checks"] = std::move(checks);
  doc["step"] = round9(report.step);
  doc["tolerance"] = round9(report.tolerance);
  doc["passed"] = report.passed;
  return detail::dump(doc);
}

AlignReport run_align(const AlignInput& input, const EmbeddingTable& embeddings,
                      const AudioVisualTree* tree, AlignOptions options) {
  std::vector<std::string> categories;
  if (input.categories) {
    categories = *input.categories;
  } else if (tree) {
    for (const auto& c : tree->categories()) categories.push_back(c.name);
  } else {
    throw ValidationError("no category vocabulary: give 'categories' or a tree");
  }
  AlignReport report;
  report.canonical = canonicalize_nouns(input.nouns, categories, embeddings, options);
  std::vector<std::string> sounding;
  for (const auto& s : input.sounding) sounding.push_back(to_lower(s));
  report.silent = silent_labels(report.canonical.labels, sounding);
  return report;
}

std::string align_report_to_json(const AlignReport& report) {
  Json doc;
  doc["canonical"] = report.canonical.labels;
  doc["silent"] = report.silent;
  doc["dropped_nouns"] = report.canonical.dropped_nouns;
  doc["dropped_categories"] = report.canonical.dropped_categories;
  doc["below_floor"] = report.canonical.below_floor;
  return detail::dump(doc);
}

std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pair_by_basename(
    const std::filesystem::path& primary, const std::filesystem::path& secondary) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(primary, ec)) throw IoError("'" + primary.string() + "' is not a directory");
  if (!fs::is_directory(secondary, ec)) {
    throw IoError("'" + secondary.string() + "' is not a directory");
  }
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(primary)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().filename());
    }
  }
  std::sort(names.begin(), names.end());
  std::vector<std::pair<fs::path, fs::path>> out;
  for (const auto& name : names) {
    const fs::path partner = secondary / name;
    if (!fs::is_regular_file(partner, ec)) {
      throw ValidationError("no partner for '" + name.string() + "' in '" + secondary.string() + "'");
    }
    out.emplace_back(primary / name, partner);
  }
  return out;
}

}  // namespace avseg
