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

#include "avseg/align.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "avseg/error.hpp"

namespace avseg {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_unsigned(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

EmbeddingTable EmbeddingTable::parse(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    const std::string_view line = text.substr(pos, end - pos);
    if (!split_ws(line).empty()) lines.emplace_back(line_no, line);
    pos = end + 1;
  }

  std::size_t first = 0;
  if (lines.size() >= 2) {
    const auto head = split_ws(lines[0].second);
    const auto next = split_ws(lines[1].second);
    if (head.size() == 2 && is_unsigned(head[0]) && is_unsigned(head[1]) &&
        next.size() == std::stoul(std::string(head[1])) + 1) {
      first = 1;
    }
  }

  EmbeddingTable table;
  for (std::size_t k = first; k < lines.size(); ++k) {
    const auto [no, line] = lines[k];
    const auto fields = split_ws(line);
    if (fields.size() < 2) throw ParseError("entry has no vector components", no, 1);
    if (table.dimension_ == 0) table.dimension_ = fields.size() - 1;
    if (fields.size() - 1 != table.dimension_) {
      throw ParseError("expected " + std::to_string(table.dimension_) + " components, found " +
                           std::to_string(fields.size() - 1),
                       no, 0);
    }
    std::vector<double> vec(table.dimension_);
    for (std::size_t d = 0; d < vec.size(); ++d) {
      if (!parse_double(fields[d + 1], vec[d])) {
        throw ParseError("invalid number '" + std::string(fields[d + 1]) + "'", no,
                         static_cast<std::size_t>(fields[d + 1].data() - line.data()) + 1);
      }
    }
    if (all_zero(vec)) throw ParseError("zero vector for '" + std::string(fields[0]) + "'", no, 1);
    table.insert(fields[0], std::move(vec));
  }
  return table;
}

bool EmbeddingTable::insert(std::string_view word, std::vector<double> vec) {
  if (dimension_ == 0) dimension_ = vec.size();
  if (vec.size() != dimension_ || vec.empty()) {
    throw ValidationError("embedding for '" + std::string(word) + "' has length " +
                          std::to_string(vec.size()) + ", expected " + std::to_string(dimension_));
  }
  if (all_zero(vec)) throw ValidationError("zero vector for '" + std::string(word) + "'");
  return entries_.emplace(to_lower(word), std::move(vec)).second;
}

const std::vector<double>* EmbeddingTable::find(std::string_view word) const {
  const auto it = entries_.find(to_lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> EmbeddingTable::embed(std::string_view phrase) const {
  const auto words = split_ws(phrase);
  if (words.empty()) return std::nullopt;
  if (words.size() == 1) {
    const auto* v = find(words.front());
    if (!v) return std::nullopt;
    return *v;
  }
  std::vector<double> mean(dimension_, 0.0);
  for (const auto w : words) {
    const auto* v = find(w);
    if (!v) return std::nullopt;
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += (*v)[d];
  }
  for (double& x : mean) x /= static_cast<double>(words.size());
  if (all_zero(mean)) return std::nullopt;
  return mean;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("vector lengths differ: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ValidationError("cosine of a zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

CanonicalNouns canonicalize_nouns(std::span<const std::string> nouns,
                                  std::span<const std::string> categories,
                                  const EmbeddingTable& embeddings, AlignOptions options) {
  CanonicalNouns out;

  // Sorted so that a strict '>' scan keeps the lexicographically smallest on ties.
  std::vector<std::string> names;
  for (const auto& c : categories) names.push_back(to_lower(c));
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::vector<std::pair<std::string, std::vector<double>>> vocab;
  for (auto& name : names) {
    if (auto v = embeddings.embed(name)) {
      vocab.emplace_back(std::move(name), std::move(*v));
    } else {
      out.dropped_categories.push_back(std::move(name));
    }
  }
  if (vocab.empty()) throw ValidationError("no category has an embedding");

  std::set<std::string> seen;
  for (const auto& raw : nouns) {
    const std::string noun = to_lower(raw);
    const auto v = embeddings.embed(noun);
    if (!v) {
      out.dropped_nouns.push_back(noun);
      continue;
    }
    std::size_t best = 0;
    double best_score = cosine(*v, vocab[0].second);
    for (std::size_t k = 1; k < vocab.size(); ++k) {
      const double s = cosine(*v, vocab[k].second);
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
    if (options.similarity_floor && best_score < *options.similarity_floor) {
      out.below_floor.push_back(noun);
      continue;
    }
    if (seen.insert(vocab[best].first).second) out.labels.push_back(vocab[best].first);
  }
  return out;
}

std::vector<std::string> silent_labels(std::span<const std::string> canonical,
                                       std::span<const std::string> sounding) {
  const std::set<std::string> exclude(sounding.begin(), sounding.end());
  std::vector<std::string> out;
  for (const auto& c : canonical) {
    if (!exclude.contains(c)) out.push_back(c);
  }
  return out;
}

}  // namespace avseg
