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

// avseg: command-line front end for the audio-visual segmentation toolkit.
//
// Exit status is 1 for bad input or a failed check and 2 for I/O errors.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "avseg/error.hpp"
#include "avseg/pipeline.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    avseg::write_text_file(out_path, text);
  }
}

avseg::AudioVisualTree load_tree(const std::string& path) {
  try {
    return avseg::parse_tree(avseg::read_text_file(path));
  } catch (const avseg::ParseError& e) {
    throw avseg::ParseError(path + ": " + e.what(), 0, 0);
  }
}

// Re-raises validation errors prefixed with the file they came from.
template <typename F>
auto from_file(const fs::path& path, F&& parse) {
  const std::string text = avseg::read_text_file(path);
  try {
    return parse(text);
  } catch (const avseg::IoError&) {
    throw;
  } catch (const avseg::Error& e) {
    throw avseg::ValidationError(path.string() + ": " + e.what());
  }
}

std::string batch_summary(const std::vector<std::string>& names,
                          const std::vector<avseg::IntegrateReport>& reports) {
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<std::string> sounding, silent;
    for (const auto& s : reports[i].result.sounding) sounding.push_back(s.label);
    for (const auto& s : reports[i].result.silent) silent.push_back(s.label);
    frames.push_back({{"name", names[i]}, {"sounding", sounding}, {"silent", silent}});
  }
  return nlohmann::json{{"frames", frames}}.dump(2) + "\n";
}

int run_integrate_cmd(const std::string& tree_path, const std::string& instances,
                      const std::string& tags, const avseg::PipelineConfig& cfg,
                      const std::string& out, unsigned jobs) {
  const auto tree = load_tree(tree_path);
  if (!fs::is_directory(instances)) {
    const auto frame = from_file(instances, avseg::parse_instance_frame);
    const auto scores = from_file(tags, avseg::parse_tag_scores);
    emit(out, avseg::integrate_report_to_json(avseg::run_integrate(tree, frame, scores, cfg), cfg));
    return kExitOk;
  }

  if (out.empty() || out == "-") throw avseg::ValidationError("batch mode needs --out <directory>");
  const auto pairs = avseg::pair_by_basename(instances, tags);
  std::vector<std::string> names;
  for (const auto& p : pairs) names.push_back(p.first.filename().string());

  std::vector<avseg::IntegrateReport> reports(pairs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const auto frame = from_file(pairs[i].first, avseg::parse_instance_frame);
      const auto scores = from_file(pairs[i].second, avseg::parse_tag_scores);
      reports[i] = avseg::run_integrate(tree, frame, scores, cfg);
      avseg::write_text_file(fs::path(out) / names[i],
                             avseg::integrate_report_to_json(reports[i], cfg));
    }
  };
  std::vector<std::future<void>> tasks;
  for (unsigned t = 0; t < std::max(1u, jobs); ++t) tasks.push_back(std::async(std::launch::async, worker));
  for (auto& t : tasks) t.get();

  avseg::write_text_file(fs::path(out) / "summary.json", batch_summary(names, reports));
  return kExitOk;
}

int run_eval_cmd(const std::string& pred, const std::string& gt, double beta2,
                 const std::string& out) {
  std::vector<avseg::EvalFrame> frames;
  if (fs::is_directory(pred)) {
    for (const auto& [p, g] : avseg::pair_by_basename(pred, gt)) {
      frames.push_back({p.filename().string(), from_file(p, avseg::parse_instance_frame),
                        from_file(g, avseg::parse_instance_frame)});
    }
  } else {
    frames.push_back({fs::path(pred).filename().string(), from_file(pred, avseg::parse_instance_frame),
                      from_file(gt, avseg::parse_instance_frame)});
  }
  emit(out, avseg::eval_report_to_json(avseg::run_eval(frames, beta2), beta2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio-visual segmentation integration, loss and evaluation tools"};
  app.require_subcommand(1);

  avseg::PipelineConfig cfg;
  std::string tree_path, out, embeddings_path;

  auto* validate = app.add_subcommand("tree-validate", "Parse and validate an audio-visual tree file");
  validate->add_option("--tree,tree", tree_path, "Tree file")->required();
  validate->add_option("--out", out, "Output file (default stdout)");

  std::string instances, tags;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* integ = app.add_subcommand("integrate", "Filter candidates and keep the sounding objects");
  integ->add_option("--tree", tree_path, "Tree file")->required();
  integ->add_option("--instances", instances, "Instance file, or directory for batch mode")->required();
  integ->add_option("--tags", tags, "Tag-score file, or directory for batch mode")->required();
  integ->add_option("--tau-tag", cfg.tau_tag, "Per-tag confidence threshold")->capture_default_str();
  integ->add_option("--iou-threshold", cfg.iou_threshold, "Phase-2 IoU threshold")->capture_default_str();
  integ->add_option("--jobs", jobs, "Worker threads in batch mode");
  integ->add_option("--out", out, "Output file, or directory in batch mode");

  std::string noise;
  std::vector<std::string> allow_unknown;
  auto* inject = app.add_subcommand("inject-noise", "Add or overwrite tag confidences");
  inject->add_option("--tags", tags, "Tag-score file")->required();
  inject->add_option("--noise", noise, "Noise spec: JSON object, inline or as a file path")->required();
  inject->add_option("--tree", tree_path, "Reject noise tags missing from this tree");
  inject->add_option("--allow-unknown", allow_unknown, "Noise tags allowed outside the tree");
  inject->add_option("--out", out, "Output file (default stdout)");

  std::string pred, gt;
  auto* eval = app.add_subcommand("eval", "Jaccard index and F-score");
  eval->add_option("--pred", pred, "Prediction instance file or directory")->required();
  eval->add_option("--gt", gt, "Ground-truth instance file or directory")->required();
  eval->add_option("--beta2", cfg.beta2, "F-score beta squared")->capture_default_str();
  eval->add_option("--out", out, "Output file (default stdout)");

  std::string frame_path;
  double step = 1e-5, tolerance = 1e-4;
  std::optional<double> tau_sil;
  auto* loss = app.add_subcommand("loss-check", "Loss breakdown and finite-difference gradient checks");
  loss->add_option("--frame,frame", frame_path, "Loss-check frame file")->required();
  loss->add_option("--step", step, "Central-difference step")->capture_default_str();
  loss->add_option("--tolerance", tolerance, "Maximum relative gradient error")->capture_default_str();
  loss->add_option("--tau-sil", tau_sil, "Override the silent-alignment threshold");
  loss->add_option("--out", out, "Output file (default stdout)");

  std::optional<double> floor;
  auto* align = app.add_subcommand("align", "Map caption nouns to categories and list silent objects");
  align->add_option("--embeddings", embeddings_path, "Word-vector text file")->required();
  align->add_option("--frame,frame", frame_path, "Alignment frame file")->required();
  align->add_option("--tree", tree_path, "Category vocabulary when the frame has none");
  align->add_option("--similarity-floor", floor, "Drop nouns whose best cosine is below this");
  align->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*validate) {
      const auto tree = load_tree(tree_path);
      const nlohmann::json doc = {{"valid", true},
                                  {"groups", tree.groups().size()},
                                  {"categories", tree.categories().size()},
                                  {"tags", tree.tags().size()}};
      emit(out, doc.dump(2) + "\n");
    } else if (*integ) {
      return run_integrate_cmd(tree_path, instances, tags, cfg, out, jobs);
    } else if (*inject) {
      const auto base = from_file(tags, avseg::parse_tag_scores);
      const std::string spec_text =
          fs::is_regular_file(noise) ? avseg::read_text_file(noise) : noise;
      const auto spec = avseg::parse_noise_spec(spec_text);
      std::optional<avseg::AudioVisualTree> tree;
      if (!tree_path.empty()) tree = load_tree(tree_path);
      emit(out, avseg::tag_scores_to_json(
                    avseg::inject_noise(base, spec, tree ? &*tree : nullptr, allow_unknown)));
    } else if (*eval) {
      return run_eval_cmd(pred, gt, cfg.beta2, out);
    } else if (*loss) {
      auto input = from_file(frame_path, avseg::parse_loss_check_input);
      if (tau_sil) input.config.silent_threshold = *tau_sil;
      const auto report = avseg::run_loss_check(input.frame, input.config, step, tolerance);
      emit(out, avseg::loss_check_to_json(report));
      if (!report.passed) {
        std::cerr << "avseg: gradient check exceeded tolerance " << tolerance << "\n";
        return kExitValidation;
      }
    } else if (*align) {
      const auto table = from_file(embeddings_path, avseg::EmbeddingTable::parse);
      const auto input = from_file(frame_path, avseg::parse_align_input);
      std::optional<avseg::AudioVisualTree> tree;
      if (!tree_path.empty()) tree = load_tree(tree_path);
      const auto report = avseg::run_align(input, table, tree ? &*tree : nullptr, {floor});
      emit(out, avseg::align_report_to_json(report));
    }
  } catch (const avseg::IoError& e) {
    std::cerr << "avseg: " << e.what() << "\n";
    return kExitIo;
  } catch (const avseg::Error& e) {
    std::cerr << "avseg: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
