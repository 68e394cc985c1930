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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lecmap/error.hpp"
#include "lecmap/model.hpp"

namespace lecmap {

using Json = nlohmann::json;

// SlideRefs travel as "deck/slide" strings; deck ids never contain '/'.
inline std::string slide_ref_string(const SlideRef& ref) { return ref.str(); }

inline SlideRef parse_slide_ref(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
    throw Error(ErrorCode::MalformedDocument, "bad slide reference '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
}

namespace detail {

inline const Json& require(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw Error(ErrorCode::MalformedDocument, where + ": missing key '" + key + "'");
  }
  return object.at(key);
}

inline std::string require_string(const Json& object, const char* key, const std::string& where) {
  const Json& value = require(object, key, where);
  if (!value.is_string()) {
    throw Error(ErrorCode::MalformedDocument, where + ": '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

inline const Json& require_array(const Json& object, const char* key, const std::string& where) {
  const Json& value = require(object, key, where);
  if (!value.is_array()) {
    throw Error(ErrorCode::MalformedDocument, where + ": '" + key + "' must be an array");
  }
  return value;
}

inline std::string as_string(const Json& value, const std::string& where) {
  if (!value.is_string()) throw Error(ErrorCode::MalformedDocument, where + ": expected a string");
  return value.get<std::string>();
}

}  // namespace detail

inline Json to_json(const TopicMap& map) {
  Json topics = Json::object();
  for (const auto& [id, topic] : map.topics) {
    Json refs = Json::array();
    for (const auto& ref : topic.occurrence_refs) refs.push_back(ref.str());
    topics[id.str()] = {{"display_names", topic.display_names}, {"occurrences", refs}};
  }

  Json occurrences = Json::object();
  for (const auto& [ref, occ] : map.occurrences) {
    Json topic_refs = Json::array();
    for (const auto& id : occ.topic_refs) topic_refs.push_back(id.str());
    Json direct = Json::array();
    for (const auto& target : occ.direct_refs) direct.push_back(target.str());
    Json entry = {{"ordinal", occ.ordinal ? Json(*occ.ordinal) : Json(nullptr)},
                  {"class", class_name(occ.occurrence_class)},
                  {"title", occ.title},
                  {"body", occ.body},
                  {"topics", topic_refs},
                  {"direct_refs", direct}};
    if (occ.checkpoint) entry["checkpoint"] = *occ.checkpoint;
    occurrences[ref.str()] = std::move(entry);
  }

  std::vector<Association> sorted = map.associations;
  std::stable_sort(sorted.begin(), sorted.end(), AssociationLess{});
  Json associations = Json::array();
  for (const auto& assoc : sorted) {
    RolePair roles = roles_of(assoc.type);
    associations.push_back({{"type", association_type_name(assoc.type)},
                            {"members",
                             {{std::string(roles.first), assoc.from.str()},
                              {std::string(roles.second), assoc.to.str()}}}});
  }

  Json scopes = Json::array();
  for (const auto& scope : map.scopes) {
    Json topic_set = Json::array();
    for (const auto& id : scope.topic_set) topic_set.push_back(id.str());
    Json slides = Json::array();
    for (const auto& ref : scope.shared_slides) slides.push_back(ref.str());
    scopes.push_back({{"topics", topic_set}, {"shared_slides", slides}});
  }

  Json corridors = Json::object();
  for (const auto& [deck, refs] : map.corridors) {
    Json slides = Json::array();
    for (const auto& ref : refs) slides.push_back(ref.str());
    corridors[deck] = std::move(slides);
  }

  return {{"map_id", map.map_id},       {"topics", topics}, {"occurrences", occurrences},
          {"associations", associations}, {"scopes", scopes}, {"corridors", corridors}};
}

// Canonical document: two-space indentation, sorted keys, trailing newline.
inline std::string serialize(const TopicMap& map) { return to_json(map).dump(2) + "\n"; }

// Structural decoding only; semantic checks belong to validate().
inline TopicMap topic_map_from_json(const Json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "topic map must be a JSON object");
  TopicMap map;
  map.map_id = require_string(doc, "map_id", "map");

  const Json& topics = require(doc, "topics", "map");
  if (!topics.is_object()) throw Error(ErrorCode::MalformedDocument, "map: 'topics' must be an object");
  for (const auto& [key, value] : topics.items()) {
    const std::string where = "topic '" + key + "'";
    Topic topic;
    topic.id = SubjectIdentifier::unchecked(key);
    for (const auto& name : require_array(value, "display_names", where)) {
      topic.display_names.insert(as_string(name, where));
    }
    for (const auto& ref : require_array(value, "occurrences", where)) {
      topic.occurrence_refs.push_back(parse_slide_ref(as_string(ref, where)));
    }
    map.topics.emplace(topic.id, std::move(topic));
  }

  const Json& occurrences = require(doc, "occurrences", "map");
  if (!occurrences.is_object()) {
    throw Error(ErrorCode::MalformedDocument, "map: 'occurrences' must be an object");
  }
  for (const auto& [key, value] : occurrences.items()) {
    const std::string where = "occurrence '" + key + "'";
    Occurrence occ;
    occ.slide_ref = parse_slide_ref(key);
    const Json& ordinal = require(value, "ordinal", where);
    if (ordinal.is_number_integer()) {
      occ.ordinal = ordinal.get<int>();
    } else if (!ordinal.is_null()) {
      throw Error(ErrorCode::MalformedDocument, where + ": 'ordinal' must be an integer or null");
    }
    occ.occurrence_class = parse_occurrence_class(require_string(value, "class", where));
    occ.title = require_string(value, "title", where);
    occ.body = require_string(value, "body", where);
    for (const auto& id : require_array(value, "topics", where)) {
      occ.topic_refs.push_back(SubjectIdentifier::unchecked(as_string(id, where)));
    }
    for (const auto& ref : require_array(value, "direct_refs", where)) {
      occ.direct_refs.insert(parse_slide_ref(as_string(ref, where)));
    }
    if (value.contains("checkpoint")) occ.checkpoint = require_string(value, "checkpoint", where);
    map.occurrences.emplace(occ.slide_ref, std::move(occ));
  }

  for (const auto& value : require_array(doc, "associations", "map")) {
    const std::string type_name = require_string(value, "type", "association");
    auto type = parse_association_type(type_name);
    if (!type) throw Error(ErrorCode::MalformedDocument, "unknown association type '" + type_name + "'");
    const Json& members = require(value, "members", "association");
    RolePair roles = roles_of(*type);
    if (!members.is_object() || members.size() != 2) {
      throw Error(ErrorCode::MalformedDocument, "association must have exactly two members");
    }
    const std::string first(roles.first);
    const std::string second(roles.second);
    map.associations.push_back(
        {*type, SubjectIdentifier::unchecked(require_string(members, first.c_str(), type_name)),
         SubjectIdentifier::unchecked(require_string(members, second.c_str(), type_name))});
  }

  for (const auto& value : require_array(doc, "scopes", "map")) {
    Scope scope;
    for (const auto& id : require_array(value, "topics", "scope")) {
      scope.topic_set.insert(SubjectIdentifier::unchecked(as_string(id, "scope")));
    }
    for (const auto& ref : require_array(value, "shared_slides", "scope")) {
      scope.shared_slides.insert(parse_slide_ref(as_string(ref, "scope")));
    }
    map.scopes.push_back(std::move(scope));
  }

  const Json& corridors = require(doc, "corridors", "map");
  if (!corridors.is_object()) throw Error(ErrorCode::MalformedDocument, "map: 'corridors' must be an object");
  for (const auto& [deck, value] : corridors.items()) {
    if (!value.is_array()) throw Error(ErrorCode::MalformedDocument, "corridor '" + deck + "' must be an array");
    auto& refs = map.corridors[deck];
    for (const auto& ref : value) refs.push_back(parse_slide_ref(as_string(ref, "corridor '" + deck + "'")));
  }
  return map;
}

inline Json parse_json_document(std::string_view text, const std::string& what);

inline TopicMap parse_topic_map(std::string_view text) {
  return topic_map_from_json(parse_json_document(text, "topic map"));
}

// Parses JSON, reporting syntax errors with line and column.
inline Json parse_json_document(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::MalformedDocument, what + ": syntax error at line " + std::to_string(line) +
                                                  ", column " + std::to_string(column) + ": " + e.what());
  }
}

}  // namespace lecmap
