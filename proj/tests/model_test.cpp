// Copyright 2026 The Lecmap Authors
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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "lecmap/serialize.hpp"
#include "lecmap/validate.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"

namespace lecmap {
namespace {

using testing::algo;
using testing::id;

// Two topics, one slide each, no associations.
TopicMap tiny_map() {
  TopicMap map;
  map.map_id = "tiny";
  for (const char* name : {"a", "b"}) {
    SlideRef ref{"d", std::string("s-") + name};
    map.topics[id(name)] = {id(name), {name}, {ref}};
    Occurrence occ;
    occ.slide_ref = ref;
    occ.topic_refs = {id(name)};
    map.occurrences[ref] = occ;
  }
  map.occurrences[{"d", "s-a"}].ordinal = 1;
  map.occurrences[{"d", "s-b"}].ordinal = 2;
  map.corridors["d"] = {{"d", "s-a"}, {"d", "s-b"}};
  return map;
}

TEST(Validate, WellFormedFixture) {
  EXPECT_TRUE(validate(testing::algo101_map()).empty());
  EXPECT_TRUE(validate(tiny_map()).empty());
}

TEST(Validate, DanglingTopicRef) {
  TopicMap map = tiny_map();
  SlideRef ref{"d", "s-c"};
  Occurrence occ;
  occ.slide_ref = ref;
  occ.topic_refs = {id("x")};
  map.occurrences[ref] = occ;
  auto violations = validate(map);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_NE(violations[0].find("'x'"), std::string::npos) << violations[0];
}

TEST(Validate, DuplicateAssociationTriple) {
  TopicMap map = tiny_map();
  map.associations.push_back({AssociationType::PreliminaryKnowledge, id("a"), id("b")});
  EXPECT_TRUE(validate(map).empty());
  map.associations.push_back({AssociationType::PreliminaryKnowledge, id("a"), id("b")});
  EXPECT_EQ(validate(map).size(), 1u);
}

TEST(Validate, SelfLoopAndDanglingMember) {
  TopicMap map = tiny_map();
  map.associations.push_back({AssociationType::TemporalContinuity, id("a"), id("a")});
  map.associations.push_back({AssociationType::Discussion, id("a"), id("nope")});
  EXPECT_EQ(validate(map).size(), 2u);
}

TEST(Validate, CorridorRules) {
  TopicMap map = tiny_map();
  std::swap(map.corridors["d"][0], map.corridors["d"][1]);
  EXPECT_EQ(validate(map).size(), 1u);

  map = tiny_map();
  map.corridors["d"].pop_back();
  EXPECT_EQ(validate(map).size(), 1u);

  map = tiny_map();
  map.occurrences[{"d", "s-b"}].ordinal = 3;
  EXPECT_FALSE(validate(map).empty());

  map = tiny_map();
  map.occurrences[{"d", "s-b"}].ordinal.reset();
  EXPECT_EQ(validate(map).size(), 1u);  // supplementary slide listed in the corridor
}

TEST(Validate, StaleScopeCache) {
  TopicMap map = testing::algo101_map();
  map.scopes.clear();
  auto violations = validate(map);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_NE(violations[0].find("scopes"), std::string::npos);
}

TEST(Validate, UnnormalizedIdentifierAndDisplayName) {
  TopicMap map = tiny_map();
  map.topics[id("a")].display_names.insert("Not A");
  EXPECT_EQ(validate(map).size(), 1u);
}

TEST(Validate, UnanchoredSlide) {
  TopicMap map = tiny_map();
  Occurrence occ;
  occ.slide_ref = {"d", "s-c"};
  map.occurrences[occ.slide_ref] = occ;
  auto violations = validate(map);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_NE(violations[0].find("not anchored"), std::string::npos);
}

TEST(Serialization, TopLevelKeys) {
  Json doc = to_json(testing::algo101_map());
  std::vector<std::string> keys;
  for (const auto& [key, _] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"associations", "corridors", "map_id", "occurrences", "scopes",
                                            "topics"}));
  EXPECT_EQ(doc["associations"][0]["type"], "PRELIMINARY_KNOWLEDGE");
  EXPECT_EQ(doc["associations"][0]["members"]["PREREQUISITE"], "graphs");
  EXPECT_EQ(doc["associations"][1]["members"]["PREDECESSOR"], "graphs");
  EXPECT_EQ(doc["occurrences"]["algo101/x1"]["ordinal"], nullptr);
}

TEST(Serialization, RoundTripFixture) {
  TopicMap map = testing::algo101_map();
  std::string text = serialize(map);
  TopicMap back = parse_topic_map(text);
  EXPECT_EQ(back, map);
  EXPECT_EQ(serialize(back), text);
}

TEST(Serialization, RoundTripRandomMaps) {
  testing::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    TopicMap map = testing::random_pipeline_map(rng, i);
    ASSERT_TRUE(validate(map).empty());
    TopicMap back = parse_topic_map(serialize(map));
    ASSERT_EQ(back, map) << serialize(map);
  }
}

TEST(Serialization, AssociationOrderIndependentOfMemoryOrder) {
  TopicMap map = testing::algo101_map();
  std::string expected = serialize(map);
  std::reverse(map.associations.begin(), map.associations.end());
  EXPECT_EQ(serialize(map), expected);
}

TEST(Serialization, RejectsMalformedDocuments) {
  auto expect_malformed = [](const std::string& text) {
    try {
      parse_topic_map(text);
      FAIL() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedDocument) << e.what();
    }
  };
  expect_malformed("{");
  expect_malformed("[]");
  expect_malformed(R"({"map_id": "m"})");
  std::string text = serialize(tiny_map());
  Json doc = Json::parse(text);
  doc["associations"] = Json::array({{{"type", "TEMPORAL_CONTINUITY"}, {"members", {{"SOURCE", "a"}, {"TARGET", "b"}}}}});
  expect_malformed(doc.dump());
  doc["associations"] = Json::array({{{"type", "FRIENDSHIP"}, {"members", {{"SOURCE", "a"}, {"TARGET", "b"}}}}});
  expect_malformed(doc.dump());
}

TEST(Serialization, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_topic_map("{\n  \"map_id\": \"m\",\n  oops\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedDocument);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ResolveSlide, BareAndQualifiedIds) {
  TopicMap map = testing::algo101_map();
  EXPECT_EQ(resolve_slide(map, "s4"), algo("s4"));
  EXPECT_EQ(resolve_slide(map, "algo101/x1"), algo("x1"));
  EXPECT_THROW(resolve_slide(map, "s9"), Error);
}

}  // namespace
}  // namespace lecmap
