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
#include <array>
#include <cctype>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lecmap/error.hpp"
#include "lecmap/identifier.hpp"

namespace lecmap {

// Addresses one slide: the deck it belongs to plus its id within that deck.
struct SlideRef {
  std::string deck_id;
  std::string slide_id;

  std::string str() const { return deck_id + "/" + slide_id; }

  friend bool operator==(const SlideRef&, const SlideRef&) = default;
  friend auto operator<=>(const SlideRef&, const SlideRef&) = default;
};

enum class OccurrenceClass { NewTopic, Definition, Example, Summary, Agenda, Overview, Fact };

inline constexpr std::array<OccurrenceClass, 7> kOccurrenceClasses = {
    OccurrenceClass::NewTopic, OccurrenceClass::Definition, OccurrenceClass::Example,
    OccurrenceClass::Summary,  OccurrenceClass::Agenda,     OccurrenceClass::Overview,
    OccurrenceClass::Fact};

constexpr std::string_view class_name(OccurrenceClass c) {
  switch (c) {
    case OccurrenceClass::NewTopic: return "NEW_TOPIC";
    case OccurrenceClass::Definition: return "DEFINITION";
    case OccurrenceClass::Example: return "EXAMPLE";
    case OccurrenceClass::Summary: return "SUMMARY";
    case OccurrenceClass::Agenda: return "AGENDA";
    case OccurrenceClass::Overview: return "OVERVIEW";
    case OccurrenceClass::Fact: return "FACT";
  }
  return "FACT";
}

// Accepts the canonical names case-insensitively ("definition", "NEW_TOPIC").
inline OccurrenceClass parse_occurrence_class(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (OccurrenceClass c : kOccurrenceClasses) {
    if (class_name(c) == upper) return c;
  }
  throw Error(ErrorCode::UnknownClass, "unknown occurrence class '" + std::string(text) + "'");
}

struct Topic {
  SubjectIdentifier id;
  std::set<std::string> display_names;
  // Kept sorted by SlideRef.
  std::vector<SlideRef> occurrence_refs;

  friend bool operator==(const Topic&, const Topic&) = default;
};

struct Occurrence {
  SlideRef slide_ref;
  // Corridor position; absent for supplementary material.
  std::optional<int> ordinal;
  OccurrenceClass occurrence_class = OccurrenceClass::Fact;
  std::string title;
  std::string body;
  // Declaration order; the first entry is the slide's primary anchor.
  std::vector<SubjectIdentifier> topic_refs;
  std::set<SlideRef> direct_refs;
  // Lecturer-declared bookmark label.
  std::optional<std::string> checkpoint;

  bool supplementary() const noexcept { return !ordinal.has_value(); }
  bool has_topic(const SubjectIdentifier& id) const {
    return std::find(topic_refs.begin(), topic_refs.end(), id) != topic_refs.end();
  }

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

enum class AssociationType { TemporalContinuity, PreliminaryKnowledge, DirectReference, Discussion };

inline constexpr std::array<AssociationType, 4> kAssociationTypes = {
    AssociationType::TemporalContinuity, AssociationType::PreliminaryKnowledge,
    AssociationType::DirectReference, AssociationType::Discussion};

constexpr std::string_view association_type_name(AssociationType t) {
  switch (t) {
    case AssociationType::TemporalContinuity: return "TEMPORAL_CONTINUITY";
    case AssociationType::PreliminaryKnowledge: return "PRELIMINARY_KNOWLEDGE";
    case AssociationType::DirectReference: return "DIRECT_REFERENCE";
    case AssociationType::Discussion: return "DISCUSSION";
  }
  return "";
}

inline std::optional<AssociationType> parse_association_type(std::string_view text) {
  for (AssociationType t : kAssociationTypes) {
    if (association_type_name(t) == text) return t;
  }
  return std::nullopt;
}

struct RolePair {
  std::string_view first;
  std::string_view second;
};

// Member roles per association type. The first role is the tail of the
// directed edge, the second its head.
constexpr RolePair roles_of(AssociationType t) {
  switch (t) {
    case AssociationType::TemporalContinuity: return {"PREDECESSOR", "SUCCESSOR"};
    case AssociationType::PreliminaryKnowledge: return {"PREREQUISITE", "DEPENDENT"};
    case AssociationType::DirectReference:
    case AssociationType::Discussion: return {"SOURCE", "TARGET"};
  }
  return {"SOURCE", "TARGET"};
}

// A typed two-member relation. `from` plays the type's first role and `to`
// the second (PREDECESSOR/SUCCESSOR, PREREQUISITE/DEPENDENT, SOURCE/TARGET).
struct Association {
  AssociationType type;
  SubjectIdentifier from;
  SubjectIdentifier to;

  friend bool operator==(const Association&, const Association&) = default;
};

// Serialization order: type name, then members in role order.
struct AssociationLess {
  bool operator()(const Association& a, const Association& b) const {
    auto an = association_type_name(a.type);
    auto bn = association_type_name(b.type);
    if (an != bn) return an < bn;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  }
};

inline void canonicalize(std::vector<Association>& associations) {
  std::sort(associations.begin(), associations.end(), AssociationLess{});
  associations.erase(std::unique(associations.begin(), associations.end()), associations.end());
}

struct Scope {
  std::set<SubjectIdentifier> topic_set;
  std::set<SlideRef> shared_slides;

  friend bool operator==(const Scope&, const Scope&) = default;
  friend auto operator<=>(const Scope& a, const Scope& b) {
    if (auto c = a.topic_set <=> b.topic_set; c != 0) return c;
    return a.shared_slides <=> b.shared_slides;
  }
};

struct TopicMap {
  std::string map_id;
  std::map<SubjectIdentifier, Topic> topics;
  std::map<SlideRef, Occurrence> occurrences;
  std::vector<Association> associations;
  // Cache of infer_scopes(topics, occurrences); recomputed after mutation.
  std::vector<Scope> scopes;
  std::map<std::string, std::vector<SlideRef>> corridors;

  const Occurrence* find_occurrence(const SlideRef& ref) const {
    auto it = occurrences.find(ref);
    return it == occurrences.end() ? nullptr : &it->second;
  }

  const Topic* find_topic(const SubjectIdentifier& id) const {
    auto it = topics.find(id);
    return it == topics.end() ? nullptr : &it->second;
  }

  std::set<std::string> deck_ids() const {
    std::set<std::string> ids;
    for (const auto& [deck, _] : corridors) ids.insert(deck);
    for (const auto& [ref, _] : occurrences) ids.insert(ref.deck_id);
    return ids;
  }

  friend bool operator==(const TopicMap&, const TopicMap&) = default;
};

// Resolves "deck/slide" or, when unambiguous, a bare slide id.
inline SlideRef resolve_slide(const TopicMap& map, std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    SlideRef ref{std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
    if (map.find_occurrence(ref)) return ref;
  }
  std::optional<SlideRef> found;
  for (const auto& [ref, _] : map.occurrences) {
    if (ref.slide_id != text) continue;
    if (found) {
      throw Error(ErrorCode::UnknownSlide,
                  "slide id '" + std::string(text) + "' is ambiguous; use deck/slide");
    }
    found = ref;
  }
  if (!found) throw Error(ErrorCode::UnknownSlide, "no slide '" + std::string(text) + "'");
  return *found;
}

}  // namespace lecmap
