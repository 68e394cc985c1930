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

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lecmap/error.hpp"
#include "lecmap/model.hpp"
#include "lecmap/serialize.hpp"

namespace lecmap {

struct ClosureEntry {
  SubjectIdentifier topic;
  int depth = 0;

  friend bool operator==(const ClosureEntry&, const ClosureEntry&) = default;
};

// Prerequisites of `topic`, breadth first, ordered by (depth, identifier).
// Throws CycleDetected if any cycle is reachable from `topic`.
inline std::vector<ClosureEntry> preliminary_closure(const TopicMap& map, const SubjectIdentifier& topic) {
  if (!map.find_topic(topic)) throw Error(ErrorCode::UnknownTopic, "no topic '" + topic.str() + "'");

  std::map<SubjectIdentifier, std::vector<SubjectIdentifier>> prerequisites_of;
  for (const auto& assoc : map.associations) {
    if (assoc.type == AssociationType::PreliminaryKnowledge) prerequisites_of[assoc.to].push_back(assoc.from);
  }
  auto next = [&](const SubjectIdentifier& id) -> const std::vector<SubjectIdentifier>& {
    static const std::vector<SubjectIdentifier> none;
    auto it = prerequisites_of.find(id);
    return it == prerequisites_of.end() ? none : it->second;
  };

  // Iterative three-colour DFS over the reachable subgraph.
  enum class Mark { Open, Done };
  std::map<SubjectIdentifier, Mark> marks;
  std::vector<std::pair<SubjectIdentifier, std::size_t>> stack{{topic, 0}};
  marks[topic] = Mark::Open;
  while (!stack.empty()) {
    auto& [node, index] = stack.back();
    const auto& children = next(node);
    if (index == children.size()) {
      marks[node] = Mark::Done;
      stack.pop_back();
      continue;
    }
    const SubjectIdentifier child = children[index++];
    auto it = marks.find(child);
    if (it == marks.end()) {
      marks[child] = Mark::Open;
      stack.emplace_back(child, 0);
    } else if (it->second == Mark::Open) {
      throw Error(ErrorCode::CycleDetected,
                  "prerequisite cycle through '" + child.str() + "' reachable from '" + topic.str() + "'");
    }
  }

  std::map<SubjectIdentifier, int> depth{{topic, 0}};
  std::deque<SubjectIdentifier> frontier{topic};
  while (!frontier.empty()) {
    SubjectIdentifier node = frontier.front();
    frontier.pop_front();
    for (const auto& child : next(node)) {
      if (depth.emplace(child, depth[node] + 1).second) frontier.push_back(child);
    }
  }

  std::vector<ClosureEntry> out;
  for (const auto& [id, d] : depth) {
    if (id != topic) out.push_back({id, d});
  }
  std::sort(out.begin(), out.end(), [](const ClosureEntry& a, const ClosureEntry& b) {
    return std::tie(a.depth, a.topic) < std::tie(b.depth, b.topic);
  });
  return out;
}

enum class AssistanceReason { SameSubject, Preliminary };

struct AssistanceItem {
  SlideRef slide;
  AssistanceReason reason = AssistanceReason::SameSubject;
  // Closure depth for Preliminary items, 0 otherwise.
  int depth = 0;

  std::string tag() const {
    return reason == AssistanceReason::SameSubject ? "SAME_SUBJECT"
                                                   : "PRELIMINARY(" + std::to_string(depth) + ")";
  }

  friend bool operator==(const AssistanceItem&, const AssistanceItem&) = default;
};

namespace detail {

// Corridor slides first by ordinal, supplementary material after them.
inline std::pair<int, int> ordinal_key(const Occurrence& occ) {
  return occ.ordinal ? std::pair{0, *occ.ordinal} : std::pair{1, 0};
}

}  // namespace detail

// Auxiliary material for a slide in two tiers: definitions and examples on
// the slide's own topics, then definitions, examples and summaries of its
// prerequisite topics.
inline std::vector<AssistanceItem> assistance(const TopicMap& map, const SlideRef& slide) {
  const Occurrence* query = map.find_occurrence(slide);
  if (!query) throw Error(ErrorCode::UnknownSlide, "no slide '" + slide.str() + "'");

  struct Ranked {
    std::tuple<int, int, std::pair<int, int>, SlideRef> key;
    AssistanceItem item;
  };

  std::vector<Ranked> same_subject;
  for (const auto& [ref, occ] : map.occurrences) {
    if (ref == slide) continue;
    if (occ.occurrence_class != OccurrenceClass::Definition && occ.occurrence_class != OccurrenceClass::Example) {
      continue;
    }
    int shared = 0;
    for (const auto& id : occ.topic_refs) shared += query->has_topic(id) ? 1 : 0;
    if (shared == 0) continue;
    same_subject.push_back({{0, -shared, detail::ordinal_key(occ), ref}, {ref, AssistanceReason::SameSubject, 0}});
  }

  std::map<SubjectIdentifier, int> closure;
  for (const auto& id : query->topic_refs) {
    for (const auto& entry : preliminary_closure(map, id)) {
      auto [it, inserted] = closure.emplace(entry.topic, entry.depth);
      if (!inserted) it->second = std::min(it->second, entry.depth);
    }
  }

  std::vector<Ranked> preliminary;
  for (const auto& [ref, occ] : map.occurrences) {
    if (ref == slide) continue;
    if (occ.occurrence_class != OccurrenceClass::Definition && occ.occurrence_class != OccurrenceClass::Example &&
        occ.occurrence_class != OccurrenceClass::Summary) {
      continue;
    }
    std::optional<int> depth;
    for (const auto& id : occ.topic_refs) {
      if (auto it = closure.find(id); it != closure.end()) depth = depth ? std::min(*depth, it->second) : it->second;
    }
    if (!depth) continue;
    preliminary.push_back({{1, *depth, detail::ordinal_key(occ), ref}, {ref, AssistanceReason::Preliminary, *depth}});
  }

  auto by_key = [](const Ranked& a, const Ranked& b) { return a.key < b.key; };
  std::sort(same_subject.begin(), same_subject.end(), by_key);
  std::sort(preliminary.begin(), preliminary.end(), by_key);

  std::vector<AssistanceItem> out;
  std::set<SlideRef> seen;
  for (const auto* tier : {&same_subject, &preliminary}) {
    for (const auto& ranked : *tier) {
      if (seen.insert(ranked.item.slide).second) out.push_back(ranked.item);
    }
  }
  return out;
}

struct ApproachPath {
  // Source first, queried topic last.
  std::vector<SubjectIdentifier> topics;
  // edges[i] joins topics[i] and topics[i + 1].
  std::vector<AssociationType> edges;

  friend bool operator==(const ApproachPath&, const ApproachPath&) = default;
  friend auto operator<=>(const ApproachPath& a, const ApproachPath& b) {
    if (auto c = a.topics <=> b.topics; c != 0) return c;
    return a.edges <=> b.edges;
  }
};

struct ApproachPaths {
  std::vector<ApproachPath> paths;
  bool truncated = false;

  friend bool operator==(const ApproachPaths&, const ApproachPaths&) = default;
};

inline constexpr std::size_t kMaxApproachPaths = 1000;

// Simple paths of 1..max_len edges that end at `topic`, over temporal and
// prerequisite edges (both pointing toward the successor/dependent).
inline ApproachPaths approaching_paths(const TopicMap& map, const SubjectIdentifier& topic, int max_len) {
  if (!map.find_topic(topic)) throw Error(ErrorCode::UnknownTopic, "no topic '" + topic.str() + "'");
  if (max_len < 1) throw Error(ErrorCode::InvalidConfig, "max_len must be at least 1");

  std::map<SubjectIdentifier, std::vector<std::pair<SubjectIdentifier, AssociationType>>> incoming;
  for (const auto& assoc : map.associations) {
    if (assoc.type == AssociationType::TemporalContinuity || assoc.type == AssociationType::PreliminaryKnowledge) {
      incoming[assoc.to].emplace_back(assoc.from, assoc.type);
    }
  }

  // Enumeration stops early on pathological graphs; the result is then
  // flagged truncated like any other overflow.
  constexpr std::size_t kEnumerationBudget = 1'000'000;
  ApproachPaths result;
  std::size_t enumerated = 0;
  // Max-heap holding the kMaxApproachPaths smallest paths seen so far.
  std::vector<ApproachPath> best;
  std::vector<SubjectIdentifier> nodes{topic};
  std::vector<AssociationType> edges;
  std::set<SubjectIdentifier> on_path{topic};

  auto keep = [&] {
    ApproachPath path{{nodes.rbegin(), nodes.rend()}, {edges.rbegin(), edges.rend()}};
    if (best.size() == kMaxApproachPaths) {
      if (!(path < best.front())) return;
      std::pop_heap(best.begin(), best.end());
      best.pop_back();
    }
    best.push_back(std::move(path));
    std::push_heap(best.begin(), best.end());
  };

  auto walk = [&](auto&& self) -> void {
    if (static_cast<int>(edges.size()) == max_len) return;
    auto it = incoming.find(nodes.back());
    if (it == incoming.end()) return;
    for (const auto& [source, type] : it->second) {
      if (on_path.count(source)) continue;
      if (enumerated == kEnumerationBudget) {
        result.truncated = true;
        return;
      }
      ++enumerated;
      nodes.push_back(source);
      edges.push_back(type);
      on_path.insert(source);
      keep();
      self(self);
      on_path.erase(source);
      edges.pop_back();
      nodes.pop_back();
    }
  };
  walk(walk);

  if (enumerated > kMaxApproachPaths) result.truncated = true;
  std::sort_heap(best.begin(), best.end());
  result.paths = std::move(best);
  return result;
}

struct CorridorEntry {
  SlideRef slide;
  int ordinal = 0;
  std::vector<SubjectIdentifier> anchors;
  OccurrenceClass occurrence_class = OccurrenceClass::Fact;

  friend bool operator==(const CorridorEntry&, const CorridorEntry&) = default;
};

inline std::vector<CorridorEntry> corridor(const TopicMap& map, const std::string& deck_id) {
  auto it = map.corridors.find(deck_id);
  if (it == map.corridors.end()) throw Error(ErrorCode::UnknownDeck, "no deck '" + deck_id + "'");
  std::vector<CorridorEntry> out;
  for (const auto& ref : it->second) {
    const Occurrence& occ = map.occurrences.at(ref);
    out.push_back({ref, occ.ordinal.value_or(0), occ.topic_refs, occ.occurrence_class});
  }
  return out;
}

// JSON views shared by the CLI and the HTTP service.

inline Json to_json(const std::vector<ClosureEntry>& closure) {
  Json out = Json::array();
  for (const auto& entry : closure) out.push_back(Json::array({entry.topic.str(), entry.depth}));
  return out;
}

inline Json to_json(const std::vector<AssistanceItem>& items) {
  Json out = Json::array();
  for (const auto& item : items) {
    out.push_back({{"slide", item.slide.str()},
                   {"reason", item.reason == AssistanceReason::SameSubject ? "SAME_SUBJECT" : "PRELIMINARY"},
                   {"depth", item.depth},
                   {"tag", item.tag()}});
  }
  return out;
}

inline Json to_json(const ApproachPaths& result) {
  Json paths = Json::array();
  for (const auto& path : result.paths) {
    Json topics = Json::array();
    for (const auto& id : path.topics) topics.push_back(id.str());
    Json edges = Json::array();
    for (auto type : path.edges) edges.push_back(association_type_name(type));
    paths.push_back({{"topics", topics}, {"edges", edges}});
  }
  return {{"paths", paths}, {"truncated", result.truncated}};
}

inline Json to_json(const std::vector<CorridorEntry>& entries) {
  Json out = Json::array();
  for (const auto& entry : entries) {
    Json anchors = Json::array();
    for (const auto& id : entry.anchors) anchors.push_back(id.str());
    out.push_back({{"slide", entry.slide.str()},
                   {"ordinal", entry.ordinal},
                   {"anchors", anchors},
                   {"class", class_name(entry.occurrence_class)}});
  }
  return out;
}

}  // namespace lecmap
