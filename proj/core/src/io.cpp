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

#include "avseg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_support.hpp"

namespace avseg {

namespace detail {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError("malformed JSON: " + what, line, column);
  }
}

double round9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError((path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& require(const Json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, "missing key '" + std::string(key) + "'");
  return *it;
}

double get_number(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number()) schema_error(path + "/" + std::string(key), "expected a number");
  return v.get<double>();
}

std::size_t get_size(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number_unsigned()) {
    schema_error(path + "/" + std::string(key), "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string get_string(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) schema_error(path + "/" + std::string(key), "expected a string");
  return v.get<std::string>();
}

const Json& get_array(const Json& obj, std::string_view key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array()) schema_error(path + "/" + std::string(key), "expected an array");
  return v;
}

std::vector<double> get_number_array(const Json& obj, std::string_view key,
                                     const std::string& path) {
  const Json& arr = get_array(obj, key, path);
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      schema_error(path + "/" + std::string(key) + "/" + std::to_string(i), "expected a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::vector<std::string> get_string_array(const Json& obj, std::string_view key,
                                          const std::string& path) {
  const Json& arr = get_array(obj, key, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      schema_error(path + "/" + std::string(key) + "/" + std::to_string(i), "expected a string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

std::vector<std::uint64_t> get_count_array(const Json& obj, std::string_view key,
                                           const std::string& path) {
  const Json& arr = get_array(obj, key, path);
  std::vector<std::uint64_t> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_unsigned()) {
      schema_error(path + "/" + std::string(key) + "/" + std::to_string(i),
                   "expected a non-negative integer");
    }
    out.push_back(arr[i].get<std::uint64_t>());
  }
  return out;
}

}  // namespace detail

using detail::Json;

namespace {

// Re-throws library validation errors with the JSON pointer prepended.
template <typename F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    detail::schema_error(path, e.what());
  }
}

std::vector<ScoredInstance> read_instances(const Json& arr, std::size_t h, std::size_t w,
                                           const std::string& path) {
  std::vector<ScoredInstance> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    const Json& item = arr[i];
    auto label = detail::get_string(item, "label", p);
    const double conf = detail::get_number(item, "confidence", p);
    if (!(conf >= 0.0 && conf <= 1.0)) detail::schema_error(p + "/confidence", "outside [0, 1]");
    const auto counts = detail::get_count_array(item, "mask_rle", p);
    auto mask = at_path(p + "/mask_rle", [&] { return BinaryMask::from_rle(h, w, counts); });
    out.push_back({std::move(label), conf, std::move(mask)});
  }
  return out;
}

}  // namespace

InstanceFrame parse_instance_frame(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  InstanceFrame frame;
  frame.height = detail::get_size(doc, "height", "");
  frame.width = detail::get_size(doc, "width", "");
  if (frame.height == 0 || frame.width == 0) detail::schema_error("", "height and width must be >= 1");
  const char* key = doc.is_object() && !doc.contains("instances") && doc.contains("sounding")
                        ? "sounding"
                        : "instances";
  const Json& arr = detail::get_array(doc, key, "");
  frame.instances = read_instances(arr, frame.height, frame.width, std::string("/") + key);
  return frame;
}

std::string instance_frame_to_json(const InstanceFrame& frame) {
  Json doc;
  doc["height"] = frame.height;
  doc["width"] = frame.width;
  Json arr = Json::array();
  for (const auto& inst : frame.instances) {
    arr.push_back({{"label", inst.label},
                   {"confidence", detail::round9(inst.confidence)},
                   {"mask_rle", inst.mask.to_rle()}});
  }
  doc["instances"] = std::move(arr);
  return detail::dump(doc);
}

TagScoreVector parse_tag_scores(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  if (!doc.is_object()) detail::schema_error("", "expected an object mapping tag to confidence");
  TagScoreVector out;
  for (const auto& [tag, value] : doc.items()) {
    const std::string path = "/" + tag;
    if (!value.is_number()) detail::schema_error(path, "expected a number");
    const double conf = value.get<double>();
    if (!(conf >= 0.0 && conf <= 1.0)) detail::schema_error(path, "confidence outside [0, 1]");
    out.emplace(tag, conf);
  }
  return out;
}

std::string tag_scores_to_json(const TagScoreVector& scores) {
  Json doc = Json::object();
  for (const auto& [tag, conf] : scores) doc[tag] = conf;
  return detail::dump(doc);
}

LossCheckInput parse_loss_check_input(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  LossCheckInput in;
  const std::size_t h = detail::get_size(doc, "height", "");
  const std::size_t w = detail::get_size(doc, "width", "");
  if (h == 0 || w == 0) detail::schema_error("", "height and width must be >= 1");

  const Json& preds = detail::get_array(doc, "predictions", "");
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::string p = "/predictions/" + std::to_string(i);
    Prediction pred;
    pred.class_probs = detail::get_number_array(preds[i], "class_probs", p);
    pred.mask = {h, w, detail::get_number_array(preds[i], "mask_probs", p)};
    if (pred.mask.values.size() != h * w) {
      detail::schema_error(p + "/mask_probs", "expected " + std::to_string(h * w) + " values");
    }
    in.frame.predictions.push_back(std::move(pred));
  }

  const Json& gts = detail::get_array(doc, "ground_truths", "");
  for (std::size_t i = 0; i < gts.size(); ++i) {
    const std::string p = "/ground_truths/" + std::to_string(i);
    const std::size_t cls = detail::get_size(gts[i], "class_id", p);
    const auto counts = detail::get_count_array(gts[i], "mask_rle", p);
    auto mask = at_path(p + "/mask_rle", [&] { return BinaryMask::from_rle(h, w, counts); });
    in.frame.ground_truths.push_back({cls, std::move(mask)});
  }

  if (doc.contains("silent_labels")) {
    const Json& arr = detail::get_array(doc, "silent_labels", "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_unsigned()) {
        detail::schema_error("/silent_labels/" + std::to_string(i), "expected a class id");
      }
      in.frame.silent_labels.insert(arr[i].get<std::size_t>());
    }
  }

  if (doc.contains("config")) {
    const Json& c = doc["config"];
    if (!c.is_object()) detail::schema_error("/config", "expected an object");
    const std::pair<const char*, double*> fields[] = {
        {"lambda_focal", &in.config.lambda_focal},   {"lambda_dice", &in.config.lambda_dice},
        {"lambda_cls", &in.config.lambda_cls},       {"lambda_ins", &in.config.lambda_ins},
        {"focal_gamma", &in.config.focal_gamma},     {"focal_alpha", &in.config.focal_alpha},
        {"silent_threshold", &in.config.silent_threshold},
        {"dice_smoothing", &in.config.dice_smoothing}};
    for (const auto& [name, dst] : fields) {
      if (c.contains(name)) *dst = detail::get_number(c, name, "/config");
    }
    for (const auto& [key, _] : c.items()) {
      const bool known = std::any_of(std::begin(fields), std::end(fields),
                                     [&](const auto& f) { return key == f.first; });
      if (!known) detail::schema_error("/config/" + key, "unknown setting");
    }
  }

  at_path("", [&] {
    in.frame.validate();
    in.config.validate();
    return 0;
  });
  return in;
}

AlignInput parse_align_input(std::string_view json_text) {
  const Json doc = detail::parse_json(json_text);
  AlignInput in;
  in.nouns = detail::get_string_array(doc, "nouns", "");
  in.sounding = doc.contains("sounding") ? detail::get_string_array(doc, "sounding", "")
                                         : std::vector<std::string>{};
  if (doc.contains("categories")) in.categories = detail::get_string_array(doc, "categories", "");
  return in;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

}  // namespace avseg
