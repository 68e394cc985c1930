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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lecmap/graph_ops.hpp"
#include "lecmap/identifier.hpp"
#include "lecmap/model.hpp"

namespace lecmap {

// Checks every TopicMap invariant. An empty result means the map is valid;
// each entry names the offending element and the rule it breaks.
inline std::vector<std::string> validate(const TopicMap& map) {
  std::vector<std::string> out;
  auto report = [&out](std::string message) { out.push_back(std::move(message)); };

  for (const auto& [id, topic] : map.topics) {
    if (!(topic.id == id)) {
      report("topic '" + id.str() + "': keyed under a different identifier '" + topic.id.str() + "'");
    }
    if (!is_normalized(id.str())) {
      report("topic '" + id.str() + "': identifier is not normalized");
    }
    for (const auto& name : topic.display_names) {
      std::string normal;
      try {
        normal = normalize_label(name).str();
      } catch (const Error&) {
      }
      if (normal != id.str()) {
        report("topic '" + id.str() + "': display name '" + name + "' does not normalize to the id");
      }
    }
    std::set<SlideRef> seen;
    for (const auto& ref : topic.occurrence_refs) {
      if (!seen.insert(ref).second) {
        report("topic '" + id.str() + "': duplicate occurrence ref '" + ref.str() + "'");
      }
      const Occurrence* occ = map.find_occurrence(ref);
      if (!occ) {
        report("topic '" + id.str() + "': dangling occurrence ref '" + ref.str() + "'");
      } else if (!occ->has_topic(id)) {
        report("topic '" + id.str() + "': occurrence '" + ref.str() + "' does not list the topic");
      }
    }
  }

  std::map<std::string, std::set<int>> ordinals;
  for (const auto& [ref, occ] : map.occurrences) {
    const std::string name = "occurrence '" + ref.str() + "'";
    if (!(occ.slide_ref == ref)) report(name + ": keyed under a different slide ref");
    if (occ.topic_refs.empty()) report(name + ": not anchored to any topic");
    std::set<SubjectIdentifier> seen;
    for (const auto& id : occ.topic_refs) {
      if (!seen.insert(id).second) report(name + ": duplicate topic ref '" + id.str() + "'");
      const Topic* topic = map.find_topic(id);
      if (!topic) {
        report(name + ": dangling topic ref '" + id.str() + "'");
      } else if (std::find(topic->occurrence_refs.begin(), topic->occurrence_refs.end(), ref) ==
                 topic->occurrence_refs.end()) {
        report(name + ": topic '" + id.str() + "' does not list the occurrence");
      }
    }
    for (const auto& target : occ.direct_refs) {
      if (!map.find_occurrence(target)) {
        report(name + ": dangling direct reference '" + target.str() + "'");
      }
    }
    if (occ.ordinal) {
      if (!ordinals[ref.deck_id].insert(*occ.ordinal).second) {
        report(name + ": ordinal " + std::to_string(*occ.ordinal) + " is not unique in its deck");
      }
    }
  }
  for (const auto& [deck, values] : ordinals) {
    int expected = 1;
    for (int value : values) {
      if (value != expected) {
        report("deck '" + deck + "': ordinals are not contiguous from 1");
        break;
      }
      ++expected;
    }
  }

  for (const auto& [deck, refs] : map.corridors) {
    const std::string name = "corridor '" + deck + "'";
    std::set<SlideRef> seen;
    int previous = 0;
    for (const auto& ref : refs) {
      if (!seen.insert(ref).second) report(name + ": slide '" + ref.str() + "' listed twice");
      if (ref.deck_id != deck) report(name + ": slide '" + ref.str() + "' belongs to another deck");
      const Occurrence* occ = map.find_occurrence(ref);
      if (!occ) {
        report(name + ": dangling slide ref '" + ref.str() + "'");
        continue;
      }
      if (occ->supplementary()) {
        report(name + ": supplementary slide '" + ref.str() + "' in corridor");
        continue;
      }
      if (*occ->ordinal <= previous) report(name + ": not ordered by ordinal at '" + ref.str() + "'");
      previous = *occ->ordinal;
    }
    for (const auto& [ref, occ] : map.occurrences) {
      if (ref.deck_id == deck && !occ.supplementary() && !seen.count(ref)) {
        report(name + ": missing corridor slide '" + ref.str() + "'");
      }
    }
  }
  for (const auto& [deck, _] : ordinals) {
    if (!map.corridors.count(deck)) report("deck '" + deck + "': corridor slides without a corridor");
  }

  std::set<std::pair<int, std::pair<std::string, std::string>>> triples;
  for (const auto& assoc : map.associations) {
    const std::string name = "association " + std::string(association_type_name(assoc.type)) + " '" +
                             assoc.from.str() + "'->'" + assoc.to.str() + "'";
    if (assoc.from == assoc.to) report(name + ": self-loop");
    if (!map.find_topic(assoc.from)) report(name + ": dangling member '" + assoc.from.str() + "'");
    if (!map.find_topic(assoc.to)) report(name + ": dangling member '" + assoc.to.str() + "'");
    if (!triples.insert({static_cast<int>(assoc.type), {assoc.from.str(), assoc.to.str()}}).second) {
      report(name + ": duplicate association");
    }
  }

  if (map.scopes != infer_scopes(map.topics, map.occurrences)) {
    report("scopes: stored scopes differ from the scopes inferred from occurrences");
  }
  return out;
}

}  // namespace lecmap
