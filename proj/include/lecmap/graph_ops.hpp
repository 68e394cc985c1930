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
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lecmap/error.hpp"
#include "lecmap/model.hpp"

namespace lecmap {

// Every slide anchored to two or more topics proposes its exact topic set as
// a scope. A scope's shared slides are all slides whose topics include the
// whole set. Result is sorted by topic set.
inline std::vector<Scope> infer_scopes(const std::map<SubjectIdentifier, Topic>& /*topics*/,
                                       const std::map<SlideRef, Occurrence>& occurrences) {
  std::set<std::set<SubjectIdentifier>> candidates;
  for (const auto& [ref, occ] : occurrences) {
    std::set<SubjectIdentifier> topic_set(occ.topic_refs.begin(), occ.topic_refs.end());
    if (topic_set.size() >= 2) candidates.insert(std::move(topic_set));
  }

  std::vector<Scope> scopes;
  scopes.reserve(candidates.size());
  for (const auto& topic_set : candidates) {
    Scope scope{topic_set, {}};
    for (const auto& [ref, occ] : occurrences) {
      bool covers = std::all_of(topic_set.begin(), topic_set.end(),
                                [&](const SubjectIdentifier& id) { return occ.has_topic(id); });
      if (covers) scope.shared_slides.insert(ref);
    }
    scopes.push_back(std::move(scope));
  }
  return scopes;
}

inline void refresh_scopes(TopicMap& map) { map.scopes = infer_scopes(map.topics, map.occurrences); }

namespace detail {

// Merged map ids are the sorted '+'-joined union of the inputs' components,
// which keeps merge commutative and associative on map_id as well.
inline std::string merged_map_id(const std::string& a, const std::string& b) {
  std::set<std::string> parts;
  for (const std::string* id : {&a, &b}) {
    std::stringstream stream(*id);
    std::string part;
    while (std::getline(stream, part, '+')) {
      if (!part.empty()) parts.insert(part);
    }
  }
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out += '+';
    out += part;
  }
  return out;
}

}  // namespace detail

// Unifies topics by identifier. Occurrences are never unified; both inputs
// must come from disjoint decks.
inline TopicMap merge(const TopicMap& a, const TopicMap& b) {
  std::set<std::string> a_decks = a.deck_ids();
  std::set<std::string> b_decks = b.deck_ids();
  std::vector<std::string> shared;
  std::set_intersection(a_decks.begin(), a_decks.end(), b_decks.begin(), b_decks.end(),
                        std::back_inserter(shared));
  if (!shared.empty()) {
    throw Error(ErrorCode::DeckCollision, "deck '" + shared.front() + "' present in both maps");
  }

  TopicMap out;
  out.map_id = detail::merged_map_id(a.map_id, b.map_id);
  out.topics = a.topics;
  for (const auto& [id, topic] : b.topics) {
    auto [it, inserted] = out.topics.try_emplace(id, topic);
    if (inserted) continue;
    Topic& target = it->second;
    target.display_names.insert(topic.display_names.begin(), topic.display_names.end());
    std::vector<SlideRef> refs;
    std::set_union(target.occurrence_refs.begin(), target.occurrence_refs.end(),
                   topic.occurrence_refs.begin(), topic.occurrence_refs.end(),
                   std::back_inserter(refs));
    target.occurrence_refs = std::move(refs);
  }

  out.occurrences = a.occurrences;
  out.occurrences.insert(b.occurrences.begin(), b.occurrences.end());

  out.associations = a.associations;
  out.associations.insert(out.associations.end(), b.associations.begin(), b.associations.end());
  canonicalize(out.associations);

  out.corridors = a.corridors;
  out.corridors.insert(b.corridors.begin(), b.corridors.end());

  refresh_scopes(out);
  return out;
}

}  // namespace lecmap
