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

#include <gtest/gtest.h>

#include <filesystem>

#include "avseg/error.hpp"

namespace avseg {
namespace {

std::string fixture(const std::string& name) {
  return read_text_file(std::string(AVSEG_DATA_DIR) + "/fixtures/" + name);
}

TEST(InstanceFrameTest, RoundTrip) {
  const auto f = parse_instance_frame(fixture("gun_man_instances.json"));
  EXPECT_EQ(f.height, 8u);
  ASSERT_EQ(f.instances.size(), 3u);
  EXPECT_EQ(f.instances[1].label, "gun");
  const auto again = parse_instance_frame(instance_frame_to_json(f));
  EXPECT_EQ(again.instances, f.instances);
}

TEST(InstanceFrameTest, SchemaErrorsNamePointer) {
  try {
    parse_instance_frame(R"({"height": 2, "width": 2, "instances": [{"label": "a", "confidence": 2, "mask_rle": [4]}]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("/instances/0/confidence"), std::string::npos);
  }
  try {
    parse_instance_frame(R"({"height": 2, "width": 2, "instances": [{"label": "a", "confidence": 1, "mask_rle": [3]}]})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("/instances/0/mask_rle"), std::string::npos);
  }
  EXPECT_THROW(parse_instance_frame(R"({"width": 2, "instances": []})"), ValidationError);
}

TEST(InstanceFrameTest, MalformedJsonHasLineAndColumn) {
  try {
    parse_instance_frame("{\n  \"height\": 2,\n  \"width\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(TagScoresTest, ParseAndWritePreserveValues) {
  const auto v = parse_tag_scores(R"({"b": 0.1, "a": 0.30000000000000004})");
  EXPECT_EQ(parse_tag_scores(tag_scores_to_json(v)), v);
  EXPECT_THROW(parse_tag_scores(R"({"a": -0.1})"), ValidationError);
  EXPECT_THROW(parse_tag_scores(R"(["a"])"), ValidationError);
}

TEST(LossCheckInputTest, ParsesFixtureAndRejectsUnknownConfig) {
  const auto in = parse_loss_check_input(fixture("loss_frame.json"));
  EXPECT_EQ(in.frame.predictions.size(), 3u);
  EXPECT_EQ(in.frame.num_classes(), 3u);
  EXPECT_EQ(in.frame.silent_labels, (std::set<std::size_t>{1}));
  EXPECT_THROW(parse_loss_check_input(
                   R"({"height":1,"width":1,"predictions":[],"ground_truths":[],"config":{"lambda_x":1}})"),
               ValidationError);
}

TEST(FileTest, MissingFileIsIoError) {
  EXPECT_THROW(read_text_file("/nonexistent/avseg/file.json"), IoError);
}

TEST(FileTest, WriteCreatesParents) {
  const auto dir = std::filesystem::temp_directory_path() / "avseg_io_test";
  std::filesystem::remove_all(dir);
  write_text_file(dir / "a" / "b.txt", "hello");
  EXPECT_EQ(read_text_file(dir / "a" / "b.txt"), "hello");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace avseg
