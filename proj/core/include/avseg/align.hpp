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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avseg {

/// Word -> D-dimensional vector. Words are stored lowercased; no vector is
/// all-zero.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  /// Parses the plain-text layout `word f1 ... fD`, one entry per line. D is
  /// taken from the first entry. A leading `<count> <dimension>` header line
  /// is recognised and skipped. Throws ParseError on ragged rows, unparsable
  /// numbers or all-zero vectors. Later duplicates of a word are ignored.
  static EmbeddingTable parse(std::string_view text);

  /// Throws ValidationError on a wrong length or an all-zero vector. Returns
  /// false (and keeps the existing entry) if the lowercased word exists.
  bool insert(std::string_view word, std::vector<double> vec);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }

  const std::vector<double>* find(std::string_view word) const;

  /// Vector of a possibly multi-word phrase: the mean of its lowercased word
  /// vectors. nullopt if any word is missing or the mean is the zero vector.
  std::optional<std::vector<double>> embed(std::string_view phrase) const;

  const std::map<std::string, std::vector<double>, std::less<>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::size_t dimension_ = 0;
  std::map<std::string, std::vector<double>, std::less<>> entries_;
};

/// dot(a, b) / (|a| |b|). Throws DimensionMismatch on different lengths and
/// ValidationError if either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

std::string to_lower(std::string_view text);

struct CanonicalNouns {
  /// Best-matching category per noun in first-occurrence order without duplicates.
  std::vector<std::string> labels;
  /// Nouns without an embedding.
  std::vector<std::string> dropped_nouns;
  /// Categories without an embedding (never chosen).
  std::vector<std::string> dropped_categories;
  /// Nouns whose best similarity fell below the floor.
  std::vector<std::string> below_floor;
};

struct AlignOptions {
  /// Nouns whose best cosine is below this are dropped. Off by default.
  std::optional<double> similarity_floor;
};

/// Replaces every noun with the category of highest cosine similarity (ties
/// go to the lexicographically smaller category). Input words are lowercased.
/// Throws ValidationError when no category has an embedding.
CanonicalNouns canonicalize_nouns(std::span<const std::string> nouns,
                                  std::span<const std::string> categories,
                                  const EmbeddingTable& embeddings, AlignOptions options = {});

/// Order-stable set difference `canonical \ sounding`.
std::vector<std::string> silent_labels(std::span<const std::string> canonical,
                                       std::span<const std::string> sounding);

}  // namespace avseg
