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

#include "avseg/avtree.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "avseg/error.hpp"

namespace avseg {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
  bool quoted;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Splits one line into tokens, dropping a trailing comment.
std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    const std::size_t start = i;
    if (line[i] == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char c = line[i];
        if (c == '\\') {
          if (i + 1 >= line.size() || (line[i + 1] != '"' && line[i + 1] != '\\')) {
            throw ParseError("invalid escape in quoted name", line_no, i + 1);
          }
          text.push_back(line[i + 1]);
          i += 2;
          continue;
        }
        if (c == '"') {
          closed = true;
          ++i;
          break;
        }
        text.push_back(c);
        ++i;
      }
      if (!closed) throw ParseError("unterminated quoted name", line_no, start + 1);
      if (i < line.size() && !is_space(line[i]) && line[i] != '#') {
        throw ParseError("expected whitespace after quoted name", line_no, i + 1);
      }
      out.push_back({std::move(text), start + 1, true});
      continue;
    }
    while (i < line.size() && !is_space(line[i]) && line[i] != '#') {
      if (line[i] == '"' || line[i] == '\\') {
        throw ParseError("unexpected character in unquoted name", line_no, i + 1);
      }
      ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), start + 1, false});
  }
  return out;
}

bool is_arrow(const Token& t) { return !t.quoted && t.text == "->"; }

bool needs_quotes(const std::string& name) {
  if (name.empty() || name == "->") return true;
  return std::any_of(name.begin(), name.end(), [](char c) {
    return is_space(c) || c == '\n' || c == '#' || c == '"' || c == '\\';
  });
}

std::string quote_name(const std::string& name) {
  if (!needs_quotes(name)) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

template <typename Index>
void insert_unique(Index& index, const AudioVisualTree::Record& rec, std::size_t position,
                   const char* layer) {
  if (rec.name.empty()) throw ParseError(std::string("empty ") + layer + " name", rec.line, 0);
  if (rec.name.find_first_of("\r\n") != std::string::npos) {
    throw ParseError(std::string(layer) + " name contains a line break", rec.line, 0);
  }
  if (!index.emplace(rec.name, position).second) {
    throw ParseError(std::string("duplicate ") + layer + " name '" + rec.name + "'", rec.line,
                     0);
  }
}

}  // namespace

AudioVisualTree AudioVisualTree::build(const std::vector<Record>& groups,
                                       const std::vector<Record>& categories,
                                       const std::vector<Record>& tags) {
  AudioVisualTree tree;
  for (const auto& g : groups) {
    insert_unique(tree.group_index_, g, tree.groups_.size(), "group");
    tree.groups_.push_back(g.name);
  }
  for (const auto& c : categories) {
    insert_unique(tree.category_index_, c, tree.categories_.size(), "category");
    const auto parent = tree.group_index_.find(c.parent);
    if (parent == tree.group_index_.end()) {
      throw ParseError("category '" + c.name + "' refers to unknown group '" + c.parent + "'",
                       c.line, 0);
    }
    tree.categories_.push_back({c.name, parent->second});
  }
  for (const auto& t : tags) {
    insert_unique(tree.tag_index_, t, tree.tags_.size(), "tag");
    const auto parent = tree.category_index_.find(t.parent);
    if (parent == tree.category_index_.end()) {
      throw ParseError("tag '" + t.name + "' refers to unknown category '" + t.parent + "'",
                       t.line, 0);
    }
    tree.tags_.push_back({t.name, parent->second});
  }
  return tree;
}

std::optional<std::size_t> AudioVisualTree::find_group(std::string_view name) const {
  const auto it = group_index_.find(name);
  if (it == group_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AudioVisualTree::find_category(std::string_view name) const {
  const auto it = category_index_.find(name);
  if (it == category_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AudioVisualTree::find_tag(std::string_view name) const {
  const auto it = tag_index_.find(name);
  if (it == tag_index_.end()) return std::nullopt;
  return it->second;
}

const std::string& AudioVisualTree::group_of(std::string_view category) const {
  const auto idx = find_category(category);
  if (!idx) throw ValidationError("unknown category '" + std::string(category) + "'");
  return groups_[categories_[*idx].group];
}

std::vector<std::string> AudioVisualTree::sibling_categories(std::string_view category) const {
  const auto idx = find_category(category);
  if (!idx) throw ValidationError("unknown category '" + std::string(category) + "'");
  const std::size_t group = categories_[*idx].group;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (i != *idx && categories_[i].group == group) out.push_back(categories_[i].name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool AudioVisualTree::are_siblings(std::string_view a, std::string_view b) const {
  const auto ia = find_category(a);
  const auto ib = find_category(b);
  return ia && ib && *ia != *ib && categories_[*ia].group == categories_[*ib].group;
}

std::vector<std::vector<std::string>> AudioVisualTree::group_members() const {
  std::vector<std::vector<std::string>> out(groups_.size());
  for (const auto& c : categories_) out[c.group].push_back(c.name);
  return out;
}

AudioVisualTree parse_tree(std::string_view text) {
  std::vector<AudioVisualTree::Record> groups, categories, tags;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    const auto tokens = tokenize(line, line_no);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const Token& kw = tokens.front();
    const auto eol_column = line.size() + 1;
    if (!kw.quoted && kw.text == "group") {
      if (tokens.size() < 2) throw ParseError("expected group name", line_no, eol_column);
      if (tokens.size() > 2) throw ParseError("unexpected token", line_no, tokens[2].column);
      if (is_arrow(tokens[1])) throw ParseError("expected group name", line_no, tokens[1].column);
      groups.push_back({tokens[1].text, {}, line_no});
    } else if (!kw.quoted && (kw.text == "category" || kw.text == "tag")) {
      if (tokens.size() < 2 || is_arrow(tokens[1])) {
        throw ParseError("expected " + kw.text + " name", line_no,
                         tokens.size() < 2 ? eol_column : tokens[1].column);
      }
      if (tokens.size() < 3 || !is_arrow(tokens[2])) {
        throw ParseError("expected '->'", line_no,
                         tokens.size() < 3 ? eol_column : tokens[2].column);
      }
      if (tokens.size() < 4 || is_arrow(tokens[3])) {
        throw ParseError("expected parent name", line_no,
                         tokens.size() < 4 ? eol_column : tokens[3].column);
      }
      if (tokens.size() > 4) throw ParseError("unexpected token", line_no, tokens[4].column);
      auto& layer = kw.text == "tag" ? tags : categories;
      layer.push_back({tokens[1].text, tokens[3].text, line_no});
    } else {
      throw ParseError("unknown record type '" + kw.text + "'", line_no, kw.column);
    }
    if (end == text.size()) break;
  }
  return AudioVisualTree::build(groups, categories, tags);
}

std::string serialize_tree(const AudioVisualTree& tree) {
  std::string out;
  for (const auto& g : tree.groups()) out += "group " + quote_name(g) + "\n";
  for (const auto& c : tree.categories()) {
    out += "category " + quote_name(c.name) + " -> " + quote_name(tree.groups()[c.group]) + "\n";
  }
  for (const auto& t : tree.tags()) {
    out += "tag " + quote_name(t.name) + " -> " +
           quote_name(tree.categories()[t.category].name) + "\n";
  }
  return out;
}

void validate_tag_scores(const TagScoreVector& scores) {
  for (const auto& [tag, conf] : scores) {
    if (!std::isfinite(conf) || conf < 0.0 || conf > 1.0) {
      throw ValidationError("confidence of tag '" + tag + "' is outside [0, 1]");
    }
  }
}

TagAggregation aggregate_tag_scores(const AudioVisualTree& tree, const TagScoreVector& scores,
                                    double tau_tag) {
  if (!(tau_tag >= 0.0 && tau_tag <= 1.0)) {
    throw ValidationError("tag threshold must lie in [0, 1]");
  }
  TagAggregation result;
  std::vector<double> sums(tree.categories().size(), 0.0);
  for (const auto& [tag, conf] : scores) {
    const auto idx = tree.find_tag(tag);
    if (!idx) {
      result.unknown_tags.push_back(tag);
      continue;
    }
    if (conf >= tau_tag) sums[tree.tags()[*idx].category] += conf;
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (sums[i] > 0.0) result.categories.emplace(tree.categories()[i].name, sums[i]);
  }
  return result;
}

}  // namespace avseg
