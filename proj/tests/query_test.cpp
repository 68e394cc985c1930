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

#include "lecmap/query.hpp"
#include "lecmap/validate.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace lecmap {
namespace {

using testing::algo;
using testing::id;

using testing::prerequisite_map;

TopicMap named_prerequisites() {
  return build_map(parse_deck(R"({"deck_id": "d", "slides": [
    {"slide_id": "s1", "topics": ["sets"]},
    {"slide_id": "s2", "topics": ["graphs"]},
    {"slide_id": "s3", "topics": ["trees"]}],
    "prerequisites": [{"prerequisite": "sets", "dependent": "graphs"},
                      {"prerequisite": "graphs", "dependent": "trees"}]})"));
}

TEST(PreliminaryClosure, Chain) {
  TopicMap map = named_prerequisites();
  EXPECT_EQ(preliminary_closure(map, id("trees")),
            (std::vector<ClosureEntry>{{id("graphs"), 1}, {id("sets"), 2}}));
  EXPECT_TRUE(preliminary_closure(map, id("sets")).empty());
}

TEST(PreliminaryClosure, Fixture) {
  EXPECT_EQ(preliminary_closure(testing::algo101_map(), id("trees")), (std::vector<ClosureEntry>{{id("graphs"), 1}}));
}

TEST(PreliminaryClosure, Errors) {
  TopicMap cyclic = prerequisite_map(2, {{0, 1}, {1, 0}});
  try {
    preliminary_closure(cyclic, id("t0"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CycleDetected);
  }
  try {
    preliminary_closure(cyclic, id("nope"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownTopic);
  }
}

TEST(PreliminaryClosure, UnreachableCycleIsIgnored) {
  // t1 <-> t2 cycle, t0 depends on nothing reachable from it.
  TopicMap map = prerequisite_map(4, {{1, 2}, {2, 1}, {0, 3}});
  EXPECT_EQ(preliminary_closure(map, id("t3")), (std::vector<ClosureEntry>{{id("t0"), 1}}));
}

TEST(PreliminaryClosure, DiamondTakesShortestDepth) {
  TopicMap map = prerequisite_map(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  EXPECT_EQ(preliminary_closure(map, id("t3")),
            (std::vector<ClosureEntry>{{id("t2"), 1}, {id("t0"), 2}, {id("t1"), 2}}));
}

TEST(PreliminaryClosure, MatchesOracleOnRandomGraphs) {
  testing::Rng rng(31);
  int cycles = 0;
  for (int i = 0; i < 400; ++i) {
    TopicMap map = testing::random_prerequisite_map(rng, 8, testing::coin(rng));
    for (const auto& [tid, _] : map.topics) {
      auto expected = oracle::closure(map, tid);
      if (expected.cycle) {
        ++cycles;
        EXPECT_THROW(preliminary_closure(map, tid), Error);
        continue;
      }
      std::vector<std::pair<std::string, int>> got;
      for (const auto& entry : preliminary_closure(map, tid)) got.emplace_back(entry.topic.str(), entry.depth);
      EXPECT_EQ(got, expected.closure);
    }
  }
  EXPECT_GT(cycles, 0);
}

TEST(Assistance, FixtureS4) {
  auto items = assistance(testing::algo101_map(), algo("s4"));
  std::vector<AssistanceItem> expected = {{algo("x1"), AssistanceReason::SameSubject, 0},
                                          {algo("s2"), AssistanceReason::Preliminary, 1},
                                          {algo("s3"), AssistanceReason::Preliminary, 1}};
  EXPECT_EQ(items, expected);
  EXPECT_EQ(items[1].tag(), "PRELIMINARY(1)");
}

TEST(Assistance, FixtureS2) {
  EXPECT_EQ(assistance(testing::algo101_map(), algo("s2")),
            (std::vector<AssistanceItem>{{algo("s3"), AssistanceReason::SameSubject, 0}}));
}

TEST(Assistance, NothingToOffer) {
  TopicMap map = prerequisite_map(2, {});
  EXPECT_TRUE(assistance(map, {"g", "s0"}).empty());
  EXPECT_THROW(assistance(map, {"g", "s9"}), Error);
}

TEST(Assistance, SameSubjectRanksBySharedTopicCount) {
  TopicMap map = build_map(parse_deck(R"({"deck_id": "d", "slides": [
    {"slide_id": "q", "topics": ["a", "b"]},
    {"slide_id": "e1", "class": "EXAMPLE", "topics": ["a"]},
    {"slide_id": "e2", "class": "DEFINITION", "topics": ["a", "b"]},
    {"slide_id": "e3", "class": "SUMMARY", "topics": ["a", "b"]}]})"));
  EXPECT_EQ(assistance(map, {"d", "q"}),
            (std::vector<AssistanceItem>{{{"d", "e2"}, AssistanceReason::SameSubject, 0},
                                         {{"d", "e1"}, AssistanceReason::SameSubject, 0}}));
}

TEST(Assistance, DuplicatesKeepHighestTier) {
  // s5 is on graphs and trees; graphs is also a prerequisite of trees.
  auto items = assistance(testing::algo101_map(), algo("s5"));
  std::vector<AssistanceItem> expected = {{algo("s2"), AssistanceReason::SameSubject, 0},
                                          {algo("s3"), AssistanceReason::SameSubject, 0},
                                          {algo("x1"), AssistanceReason::SameSubject, 0}};
  EXPECT_EQ(items, expected);
}

TEST(Assistance, OutputPredicateOnRandomMaps) {
  testing::Rng rng(32);
  for (int i = 0; i < 200; ++i) {
    TopicMap map = testing::random_map(rng, "d");
    for (const auto& [ref, occ] : map.occurrences) {
      std::vector<AssistanceItem> items;
      try {
        items = assistance(map, ref);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::CycleDetected);
        continue;
      }
      std::set<SubjectIdentifier> related(occ.topic_refs.begin(), occ.topic_refs.end());
      for (const auto& topic : occ.topic_refs) {
        for (const auto& entry : preliminary_closure(map, topic)) related.insert(entry.topic);
      }
      std::set<SlideRef> seen;
      for (const auto& item : items) {
        EXPECT_NE(item.slide, ref);
        EXPECT_TRUE(seen.insert(item.slide).second);
        const auto& other = map.occurrences.at(item.slide);
        EXPECT_TRUE(std::any_of(other.topic_refs.begin(), other.topic_refs.end(),
                                [&](const SubjectIdentifier& t) { return related.count(t) > 0; }));
      }
      EXPECT_EQ(assistance(map, ref), items);
    }
  }
}

TEST(ApproachingPaths, Fixture) {
  auto result = approaching_paths(testing::algo101_map(), id("trees"), 2);
  ASSERT_EQ(result.paths.size(), 2u);
  EXPECT_EQ(result.paths[0], (ApproachPath{{id("graphs"), id("trees")}, {AssociationType::TemporalContinuity}}));
  EXPECT_EQ(result.paths[1], (ApproachPath{{id("graphs"), id("trees")}, {AssociationType::PreliminaryKnowledge}}));
  EXPECT_FALSE(result.truncated);
}

TEST(ApproachingPaths, IsolatedTopicAndSingleEdge) {
  TopicMap map = prerequisite_map(3, {{0, 1}});
  EXPECT_TRUE(approaching_paths(map, id("t2"), 3).paths.empty());
  auto one = approaching_paths(map, id("t1"), 1);
  ASSERT_EQ(one.paths.size(), 1u);
  EXPECT_EQ(one.paths[0].topics.size(), 2u);
  EXPECT_THROW(approaching_paths(map, id("zz"), 1), Error);
}

TEST(ApproachingPaths, MatchesExhaustiveEnumeration) {
  testing::Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    TopicMap map = testing::random_map(rng, "d", {6, 12, 0.1, 0.3});
    for (const auto& [tid, _] : map.topics) {
      for (int len : {1, 2, 3, 5}) {
        auto result = approaching_paths(map, tid, len);
        EXPECT_EQ(result.paths, oracle::approach_paths(map, tid, len));
        EXPECT_FALSE(result.truncated);
      }
    }
  }
}

// Complete prerequisite DAG on n topics; slides in reverse order and then in
// order add temporal edges both ways between neighbours.
TopicMap dense_map(int n) {
  AnnotatedDeck deck;
  deck.deck_id = "g";
  for (int i = n - 1; i >= 0; --i) deck.slides.push_back({"s" + std::to_string(i), "", "", OccurrenceClass::Fact, {"t" + std::to_string(i)}, {}, {}});
  for (int i = 0; i < n; ++i) deck.slides.push_back({"r" + std::to_string(i), "", "", OccurrenceClass::Fact, {"t" + std::to_string(i)}, {}, {}});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) deck.prerequisites.push_back({"t" + std::to_string(a), "t" + std::to_string(b)});
  return build_map(deck);
}

TEST(ApproachingPaths, TruncatesAtOneThousand) {
  auto result = approaching_paths(dense_map(9), id("t8"), 8);
  EXPECT_TRUE(result.truncated);
  EXPECT_EQ(result.paths.size(), kMaxApproachPaths);
  EXPECT_TRUE(std::is_sorted(result.paths.begin(), result.paths.end()));
}

TEST(ApproachingPaths, EnumerationBudgetBoundsDenseMaps) {
  // Far more than a million simple paths exist here.
  auto start = std::chrono::steady_clock::now();
  auto result = approaching_paths(dense_map(14), id("t13"), 13);
  EXPECT_TRUE(result.truncated);
  EXPECT_EQ(result.paths.size(), kMaxApproachPaths);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(20));
}

TEST(ApproachingPaths, TruncatedPrefixIsGloballySmallest) {
  TopicMap map = dense_map(8);
  auto result = approaching_paths(map, id("t7"), 7);
  auto all = oracle::approach_paths(map, id("t7"), 7);
  ASSERT_GT(all.size(), kMaxApproachPaths);
  all.resize(kMaxApproachPaths);
  EXPECT_TRUE(result.truncated);
  EXPECT_EQ(result.paths, all);
}

TEST(Corridor, Fixture) {
  auto entries = corridor(testing::algo101_map(), "algo101");
  ASSERT_EQ(entries.size(), 6u);
  EXPECT_EQ(entries[0].slide, algo("s1"));
  EXPECT_EQ(entries[0].anchors, (std::vector<SubjectIdentifier>{id("graphs")}));
  EXPECT_EQ(entries[0].occurrence_class, OccurrenceClass::NewTopic);
  EXPECT_EQ(entries[5].ordinal, 6);
}

TEST(Corridor, SingleSlideAndUnknownDeck) {
  TopicMap map = build_map(parse_deck(R"({"deck_id": "g", "slides": [{"slide_id": "s0", "topics": ["t0"]}]})"));
  EXPECT_EQ(corridor(map, "g").size(), 1u);
  try {
    corridor(map, "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownDeck);
  }
}

}  // namespace
}  // namespace lecmap
