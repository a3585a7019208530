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

// Internal helpers shared by the JSON readers and writers. Not installed.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "avseg/error.hpp"
#include "json.hpp"

namespace avseg::detail {

// nlohmann::json keeps object keys in a std::map, so dumps are key-sorted.
using Json = nlohmann::json;

Json parse_json(std::string_view text);

/// Rounds to 9 significant digits so that the dumped text is reproducible.
double round9(double x);

/// Pretty-printed (2-space) dump with a trailing newline.
std::string dump(const Json& j);

const Json& require(const Json& obj, std::string_view key, const std::string& path);
double get_number(const Json& obj, std::string_view key, const std::string& path);
std::size_t get_size(const Json& obj, std::string_view key, const std::string& path);
std::string get_string(const Json& obj, std::string_view key, const std::string& path);
const Json& get_array(const Json& obj, std::string_view key, const std::string& path);
std::vector<double> get_number_array(const Json& obj, std::string_view key,
                                     const std::string& path);
std::vector<std::string> get_string_array(const Json& obj, std::string_view key,
                                          const std::string& path);
std::vector<std::uint64_t> get_count_array(const Json& obj, std::string_view key,
                                           const std::string& path);

[[noreturn]] void schema_error(const std::string& path, const std::string& what);

}  // namespace avseg::detail
