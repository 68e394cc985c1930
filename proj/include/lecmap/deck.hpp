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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lecmap/error.hpp"
#include "lecmap/graph_ops.hpp"
#include "lecmap/identifier.hpp"
#include "lecmap/model.hpp"
#include "lecmap/serialize.hpp"

namespace lecmap {

struct SlideSpec {
  std::string slide_id;
  std::string title;
  std::string body;
  OccurrenceClass occurrence_class = OccurrenceClass::Fact;
  std::vector<std::string> topics;
  std::vector<std::string> refs;
  std::optional<std::string> checkpoint;

  friend bool operator==(const SlideSpec&, const SlideSpec&) = default;
};

struct Prerequisite {
  std::string prerequisite;
  std::string dependent;

  friend bool operator==(const Prerequisite&, const Prerequisite&) = default;
};

// A lecturer's deck with topic labels, classes and prerequisites attached.
struct AnnotatedDeck {
  std::string deck_id;
  std::string title;
  std::vector<SlideSpec> slides;
  std::vector<Prerequisite> prerequisites;
  std::vector<SlideSpec> supplementary;

  friend bool operator==(const AnnotatedDeck&, const AnnotatedDeck&) = default;
};

namespace detail {

inline SlideSpec slide_from_json(const Json& value, const std::string& where) {
  if (!value.is_object()) throw Error(ErrorCode::MalformedDocument, where + ": slide must be an object");
  SlideSpec slide;
  slide.slide_id = require_string(value, "slide_id", where);
  const std::string name = where + " '" + slide.slide_id + "'";
  if (slide.slide_id.empty()) throw Error(ErrorCode::MalformedDocument, where + ": empty slide_id");
  if (value.contains("title")) slide.title = require_string(value, "title", name);
  if (value.contains("body")) slide.body = require_string(value, "body", name);
  if (value.contains("class") && !value.at("class").is_null()) {
    slide.occurrence_class = parse_occurrence_class(require_string(value, "class", name));
  }
  for (const auto& label : require_array(value, "topics", name)) {
    slide.topics.push_back(as_string(label, name));
  }
  if (slide.topics.empty()) {
    throw Error(ErrorCode::MalformedDocument, name + ": a slide needs at least one topic");
  }
  if (value.contains("refs")) {
    for (const auto& ref : require_array(value, "refs", name)) slide.refs.push_back(as_string(ref, name));
  }
  if (value.contains("checkpoint")) slide.checkpoint = require_string(value, "checkpoint", name);
  return slide;
}

}  // namespace detail

// Decodes and checks an annotated-deck document.
inline AnnotatedDeck parse_deck(std::string_view document) {
  using namespace detail;
  Json doc = parse_json_document(document, "deck");
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "deck must be a JSON object");

  AnnotatedDeck deck;
  deck.deck_id = require_string(doc, "deck_id", "deck");
  if (deck.deck_id.empty() || deck.deck_id.find('/') != std::string::npos) {
    throw Error(ErrorCode::MalformedDocument, "deck_id must be non-empty and contain no '/'");
  }
  if (doc.contains("title")) deck.title = require_string(doc, "title", "deck");
  for (const auto& slide : require_array(doc, "slides", "deck")) {
    deck.slides.push_back(slide_from_json(slide, "slide"));
  }
  if (doc.contains("supplementary")) {
    for (const auto& slide : require_array(doc, "supplementary", "deck")) {
      deck.supplementary.push_back(slide_from_json(slide, "supplementary slide"));
    }
  }
  if (doc.contains("prerequisites")) {
    for (const auto& pair : require_array(doc, "prerequisites", "deck")) {
      deck.prerequisites.push_back({require_string(pair, "prerequisite", "prerequisite"),
                                    require_string(pair, "dependent", "prerequisite")});
    }
  }

  std::set<std::string> slide_ids;
  std::set<SubjectIdentifier> labels;
  for (const auto* list : {&deck.slides, &deck.supplementary}) {
    for (const auto& slide : *list) {
      if (!slide_ids.insert(slide.slide_id).second) {
        throw Error(ErrorCode::DuplicateSlideId, "slide id '" + slide.slide_id + "' appears twice");
      }
      for (const auto& label : slide.topics) labels.insert(normalize_label(label));
    }
  }
  for (const auto* list : {&deck.slides, &deck.supplementary}) {
    for (const auto& slide : *list) {
      for (const auto& ref : slide.refs) {
        if (!slide_ids.count(ref)) {
          throw Error(ErrorCode::DanglingReference,
                      "slide '" + slide.slide_id + "' references unknown slide '" + ref + "'");
        }
      }
    }
  }
  for (const auto& pair : deck.prerequisites) {
    for (const auto* label : {&pair.prerequisite, &pair.dependent}) {
      if (!labels.count(normalize_label(*label))) {
        throw Error(ErrorCode::DanglingReference, "prerequisite label '" + *label + "' names no topic");
      }
    }
    if (normalize_label(pair.prerequisite) == normalize_label(pair.dependent)) {
      throw Error(ErrorCode::MalformedDocument, "topic '" + pair.dependent + "' listed as its own prerequisite");
    }
  }
  return deck;
}

namespace detail {

inline std::vector<SubjectIdentifier> slide_topics(const SlideSpec& slide) {
  std::vector<SubjectIdentifier> ids;
  for (const auto& label : slide.topics) {
    SubjectIdentifier id = normalize_label(label);
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
  }
  return ids;
}

}  // namespace detail

// Temporal continuity between the topics of consecutive corridor slides.
// Sorted and free of duplicates and self-edges.
inline std::vector<Association> derive_temporal(const AnnotatedDeck& deck) {
  std::vector<Association> out;
  for (std::size_t i = 0; i + 1 < deck.slides.size(); ++i) {
    for (const auto& from : detail::slide_topics(deck.slides[i])) {
      for (const auto& to : detail::slide_topics(deck.slides[i + 1])) {
        if (from != to) out.push_back({AssociationType::TemporalContinuity, from, to});
      }
    }
  }
  canonicalize(out);
  return out;
}

inline TopicMap build_map(const AnnotatedDeck& deck) {
  TopicMap map;
  map.map_id = deck.deck_id;
  auto& corridor = map.corridors[deck.deck_id];
  std::map<std::string, std::vector<SubjectIdentifier>> topics_by_slide;

  auto add_slide = [&](const SlideSpec& spec, std::optional<int> ordinal) {
    Occurrence occ;
    occ.slide_ref = {deck.deck_id, spec.slide_id};
    occ.ordinal = ordinal;
    occ.occurrence_class = spec.occurrence_class;
    occ.title = spec.title;
    occ.body = spec.body;
    occ.checkpoint = spec.checkpoint;
    for (const auto& ref : spec.refs) occ.direct_refs.insert({deck.deck_id, ref});
    for (const auto& label : spec.topics) {
      SubjectIdentifier id = normalize_label(label);
      Topic& topic = map.topics[id];
      topic.id = id;
      topic.display_names.insert(label);
      if (!occ.has_topic(id)) {
        occ.topic_refs.push_back(id);
        topic.occurrence_refs.push_back(occ.slide_ref);
      }
    }
    topics_by_slide[spec.slide_id] = occ.topic_refs;
    if (ordinal) corridor.push_back(occ.slide_ref);
    map.occurrences.emplace(occ.slide_ref, std::move(occ));
  };

  int ordinal = 0;
  for (const auto& spec : deck.slides) add_slide(spec, ++ordinal);
  for (const auto& spec : deck.supplementary) add_slide(spec, std::nullopt);
  for (auto& [id, topic] : map.topics) std::sort(topic.occurrence_refs.begin(), topic.occurrence_refs.end());

  map.associations = derive_temporal(deck);
  for (const auto& pair : deck.prerequisites) {
    map.associations.push_back({AssociationType::PreliminaryKnowledge, normalize_label(pair.prerequisite),
                                normalize_label(pair.dependent)});
  }
  for (const auto* list : {&deck.slides, &deck.supplementary}) {
    for (const auto& spec : *list) {
      for (const auto& ref : spec.refs) {
        for (const auto& from : topics_by_slide.at(spec.slide_id)) {
          for (const auto& to : topics_by_slide.at(ref)) {
            if (from != to) map.associations.push_back({AssociationType::DirectReference, from, to});
          }
        }
      }
    }
  }
  canonicalize(map.associations);
  refresh_scopes(map);
  return map;
}

}  // namespace lecmap
