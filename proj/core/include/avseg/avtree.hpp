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
#include <string>
#include <string_view>
#include <vector>

namespace avseg {

/// Audio tag name -> confidence in [0, 1].
using TagScoreVector = std::map<std::string, double>;

/// Visual category name -> aggregated audio evidence (> 0).
using CategoryScoreMap = std::map<std::string, double>;

/// Three-layer hierarchy mapping audio tags to the visual categories that can
/// emit them, and visual categories to groups of similar-sounding categories.
///
/// Layers are stored in declaration order. A tree is immutable once built and
/// all queries are const.
class AudioVisualTree {
 public:
  struct Category {
    std::string name;
    std::size_t group;  // index into groups()

    friend bool operator==(const Category&, const Category&) = default;
  };
  struct Tag {
    std::string name;
    std::size_t category;  // index into categories()

    friend bool operator==(const Tag&, const Tag&) = default;
  };

  /// Unresolved record as it appears in a tree file. `line` is used only for
  /// diagnostics and may be 0.
  struct Record {
    std::string name;
    std::string parent;
    std::size_t line = 0;
  };

  AudioVisualTree() = default;

  /// Resolves parent names and validates uniqueness within each layer.
  /// Throws ParseError (with the offending record's line) on a duplicate name
  /// or a dangling parent reference.
  static AudioVisualTree build(const std::vector<Record>& groups,
                               const std::vector<Record>& categories,
                               const std::vector<Record>& tags);

  const std::vector<std::string>& groups() const noexcept { return groups_; }
  const std::vector<Category>& categories() const noexcept { return categories_; }
  const std::vector<Tag>& tags() const noexcept { return tags_; }

  std::optional<std::size_t> find_group(std::string_view name) const;
  std::optional<std::size_t> find_category(std::string_view name) const;
  std::optional<std::size_t> find_tag(std::string_view name) const;

  bool has_category(std::string_view name) const { return find_category(name).has_value(); }

  /// Group name of a category. Throws ValidationError for unknown categories.
  const std::string& group_of(std::string_view category) const;

  /// Category names that share `category`'s group, excluding `category`,
  /// sorted lexicographically. Throws ValidationError for unknown names.
  std::vector<std::string> sibling_categories(std::string_view category) const;

  /// True when both names are known categories under the same group and differ.
  bool are_siblings(std::string_view a, std::string_view b) const;

  /// Category names of every group, in declaration order.
  std::vector<std::vector<std::string>> group_members() const;

  friend bool operator==(const AudioVisualTree& a, const AudioVisualTree& b) {
    return a.groups_ == b.groups_ && a.categories_ == b.categories_ && a.tags_ == b.tags_;
  }

 private:
  std::vector<std::string> groups_;
  std::vector<Category> categories_;
  std::vector<Tag> tags_;
  std::map<std::string, std::size_t, std::less<>> group_index_;
  std::map<std::string, std::size_t, std::less<>> category_index_;
  std::map<std::string, std::size_t, std::less<>> tag_index_;
};

/// Parses the line-oriented tree format:
///
///     # comment
///     group <name>
///     category <name> -> <group>
///     tag <name> -> <category>
///
/// Names with whitespace or any of #"\ must be double-quoted; inside quotes,
/// a backslash escapes the next quote or backslash. Records may appear in any order.
AudioVisualTree parse_tree(std::string_view text);

/// Writes the layers top-down, each in declaration order.
/// parse_tree(serialize_tree(t)) == t.
std::string serialize_tree(const AudioVisualTree& tree);

struct TagAggregation {
  CategoryScoreMap categories;
  /// Tags present in the score vector but absent from the tree, sorted.
  std::vector<std::string> unknown_tags;
};

/// Sums, per visual category, the confidences of its child tags that are at
/// or above `tau_tag`. Only categories with a strictly positive sum are kept.
/// Tags missing from the tree are skipped and reported.
TagAggregation aggregate_tag_scores(const AudioVisualTree& tree, const TagScoreVector& scores,
                                    double tau_tag);

/// Throws ValidationError unless every confidence is a finite value in [0, 1].
void validate_tag_scores(const TagScoreVector& scores);

}  // namespace avseg
