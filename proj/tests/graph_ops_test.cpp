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

#include <string>

#include <gtest/gtest.h>

#include "lecmap/graph_ops.hpp"
#include "lecmap/serialize.hpp"
#include "lecmap/validate.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace lecmap {
namespace {

using testing::algo;
using testing::id;

TopicMap deck_map(const std::string& deck_id, const std::string& slides) {
  return build_map(parse_deck(R"({"deck_id": ")" + deck_id + R"(", "slides": [)" + slides + "]}"));
}

TEST(InferScopes, Algo101) {
  TopicMap map = testing::algo101_map();
  auto scopes = infer_scopes(map.topics, map.occurrences);
  ASSERT_EQ(scopes.size(), 1u);
  EXPECT_EQ(scopes[0], (Scope{{id("graphs"), id("trees")}, {algo("s5")}}));
  EXPECT_EQ(scopes, oracle::scopes(map));
}

TEST(InferScopes, SingleTopicSlidesGiveNone) {
  TopicMap map = deck_map("d", R"({"slide_id": "s1", "topics": ["a"]}, {"slide_id": "s2", "topics": ["b"]})");
  EXPECT_TRUE(infer_scopes(map.topics, map.occurrences).empty());
}

TEST(InferScopes, IdenticalTopicSetsUnify) {
  TopicMap map = deck_map("d", R"({"slide_id": "s1", "topics": ["a", "b"]}, {"slide_id": "s2", "topics": ["B", "A"]})");
  auto scopes = infer_scopes(map.topics, map.occurrences);
  ASSERT_EQ(scopes.size(), 1u);
  EXPECT_EQ(scopes[0].shared_slides, (std::set<SlideRef>{{"d", "s1"}, {"d", "s2"}}));
}

TEST(InferScopes, SupersetSlidesShareSmallerScopes) {
  TopicMap map = deck_map("d", R"({"slide_id": "s1", "topics": ["a", "b"]}, {"slide_id": "s2", "topics": ["a", "b", "c"]})");
  auto scopes = infer_scopes(map.topics, map.occurrences);
  ASSERT_EQ(scopes.size(), 2u);
  EXPECT_EQ(scopes[0], (Scope{{id("a"), id("b")}, {{"d", "s1"}, {"d", "s2"}}}));
  EXPECT_EQ(scopes[1], (Scope{{id("a"), id("b"), id("c")}, {{"d", "s2"}}}));
  // {a,c} is not the exact topic set of any slide.
  EXPECT_EQ(scopes, oracle::scopes(map));
}

TEST(InferScopes, MatchesSubsetEnumeration) {
  testing::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    TopicMap map = testing::random_map(rng, "d");
    ASSERT_EQ(infer_scopes(map.topics, map.occurrences), oracle::scopes(map)) << serialize(map);
  }
}

TEST(Merge, UnifiesTopicsByIdentifier) {
  TopicMap a = deck_map("A", R"({"slide_id": "a1", "topics": ["graphs"]})");
  TopicMap b = deck_map("B", R"({"slide_id": "b1", "topics": ["Graphs"]})");
  TopicMap merged = merge(a, b);
  ASSERT_EQ(merged.topics.size(), 1u);
  const Topic& topic = merged.topics.at(id("graphs"));
  EXPECT_EQ(topic.occurrence_refs, (std::vector<SlideRef>{{"A", "a1"}, {"B", "b1"}}));
  EXPECT_EQ(topic.display_names, (std::set<std::string>{"Graphs", "graphs"}));
  EXPECT_EQ(merged.corridors.size(), 2u);
  EXPECT_EQ(merged.map_id, "A+B");
  EXPECT_TRUE(validate(merged).empty());
}

TEST(Merge, EmptyMapIsIdentity) {
  TopicMap a = testing::algo101_map();
  TopicMap empty;
  EXPECT_EQ(merge(a, empty), a);
  EXPECT_EQ(merge(empty, a), a);
}

TEST(Merge, DeduplicatesAssociations) {
  const std::string slides = R"({"slide_id": "s1", "topics": ["graphs"]}, {"slide_id": "s2", "topics": ["trees"]})";
  TopicMap merged = merge(deck_map("A", slides), deck_map("B", slides));
  ASSERT_EQ(merged.associations.size(), 1u);
  EXPECT_EQ(merged.associations[0], (Association{AssociationType::TemporalContinuity, id("graphs"), id("trees")}));
}

TEST(Merge, CrossDeckScopesAreRecomputed) {
  TopicMap a = deck_map("A", R"({"slide_id": "s1", "topics": ["x", "y"]})");
  TopicMap b = deck_map("B", R"({"slide_id": "s1", "topics": ["X", "Y"]})");
  TopicMap merged = merge(a, b);
  ASSERT_EQ(merged.scopes.size(), 1u);
  EXPECT_EQ(merged.scopes[0].shared_slides, (std::set<SlideRef>{{"A", "s1"}, {"B", "s1"}}));
}

TEST(Merge, DeckCollision) {
  TopicMap a = testing::algo101_map();
  try {
    merge(a, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeckCollision);
  }
}

TEST(Merge, CommutativeAssociativeAndAdditive) {
  testing::Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    TopicMap a = testing::random_map(rng, "a");
    TopicMap b = testing::random_map(rng, "b");
    TopicMap c = testing::random_map(rng, "c");
    TopicMap ab = merge(a, b);
    EXPECT_EQ(serialize(ab), serialize(merge(b, a)));
    EXPECT_EQ(serialize(merge(ab, c)), serialize(merge(a, merge(b, c))));
    EXPECT_EQ(ab.occurrences.size(), a.occurrences.size() + b.occurrences.size());
    EXPECT_EQ(ab.corridors.at("a"), a.corridors.at("a"));
    EXPECT_EQ(ab.corridors.at("b"), b.corridors.at("b"));
    auto violations = validate(ab);
    ASSERT_TRUE(violations.empty()) << violations.front();
  }
}

}  // namespace
}  // namespace lecmap
