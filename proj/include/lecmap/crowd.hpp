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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "lecmap/error.hpp"
#include "lecmap/graph_ops.hpp"
#include "lecmap/identifier.hpp"
#include "lecmap/model.hpp"
#include "lecmap/serialize.hpp"

namespace lecmap {

// The fixed rating scale of a session. Exactly one label counts as positive;
// every other label signals a lack of comprehension.
struct ComprehensionClasses {
  std::vector<std::string> labels{"clear", "unclear", "lost"};
  std::string positive = "clear";

  void check() const {
    if (labels.empty()) throw Error(ErrorCode::InvalidConfig, "comprehension class list is empty");
    std::set<std::string> seen;
    for (const auto& label : labels) {
      if (label.empty()) throw Error(ErrorCode::InvalidConfig, "empty comprehension class label");
      if (!seen.insert(label).second) {
        throw Error(ErrorCode::InvalidConfig, "duplicate comprehension class '" + label + "'");
      }
    }
    if (!seen.count(positive)) {
      throw Error(ErrorCode::InvalidConfig, "positive class '" + positive + "' is not in the class list");
    }
  }

  bool contains(const std::string& label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
  }
  bool negative(const std::string& label) const { return label != positive; }

  friend bool operator==(const ComprehensionClasses&, const ComprehensionClasses&) = default;
};

struct Rating {
  std::string comprehension;
  friend bool operator==(const Rating&, const Rating&) = default;
};

struct Note {
  std::string text;
  // Normalized identifiers once the note has been applied to a log.
  std::vector<std::string> tags;
  std::vector<SlideRef> refs;
  friend bool operator==(const Note&, const Note&) = default;
};

struct Bookmark {
  std::string label;
  friend bool operator==(const Bookmark&, const Bookmark&) = default;
};

struct Annotation {
  std::string participant;
  SlideRef slide;
  std::variant<Rating, Note, Bookmark> kind;
  std::int64_t at = 0;
  // Server-assigned; 0 in logs that never went through a session.
  std::uint64_t seq = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

using AnnotationLog = std::vector<Annotation>;

// Checks `annotation` against the map and class list, normalizes note tags
// and appends it. Earlier ratings stay in the log; aggregation only counts
// the latest rating per participant and slide.
inline void apply_annotation(AnnotationLog& log, Annotation annotation, const TopicMap& map,
                             const ComprehensionClasses& classes, bool live = true) {
  if (!live) throw Error(ErrorCode::SessionNotLive, "annotations are accepted only while the session is live");
  if (!map.find_occurrence(annotation.slide)) {
    throw Error(ErrorCode::UnknownSlide, "no slide '" + annotation.slide.str() + "'");
  }
  if (auto* rating = std::get_if<Rating>(&annotation.kind)) {
    if (!classes.contains(rating->comprehension)) {
      throw Error(ErrorCode::UnknownClass, "unknown comprehension class '" + rating->comprehension + "'");
    }
  } else if (auto* note = std::get_if<Note>(&annotation.kind)) {
    std::vector<std::string> tags;
    for (const auto& raw : note->tags) {
      std::string tag = normalize_label(raw).str();
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(std::move(tag));
    }
    note->tags = std::move(tags);
    for (const auto& ref : note->refs) {
      if (!map.find_occurrence(ref)) throw Error(ErrorCode::UnknownSlide, "note references unknown slide '" + ref.str() + "'");
    }
  }
  log.push_back(std::move(annotation));
}

// Latest rating per (slide, participant), by log order.
inline std::map<std::pair<SlideRef, std::string>, std::string> effective_ratings(const AnnotationLog& log) {
  std::map<std::pair<SlideRef, std::string>, std::string> out;
  for (const auto& annotation : log) {
    if (const auto* rating = std::get_if<Rating>(&annotation.kind)) {
      out[{annotation.slide, annotation.participant}] = rating->comprehension;
    }
  }
  return out;
}

struct ReportOptions {
  int quorum = 3;
  double threshold = 0.5;

  void check() const {
    if (quorum < 1) throw Error(ErrorCode::InvalidConfig, "quorum must be at least 1");
    if (!(threshold > 0.0 && threshold <= 1.0)) throw Error(ErrorCode::InvalidConfig, "threshold must be in (0, 1]");
  }
};

struct SlideComprehension {
  SlideRef slide;
  std::optional<int> ordinal;
  std::map<std::string, int> counts;
  int total = 0;
  int negative = 0;
  bool flagged = false;

  friend bool operator==(const SlideComprehension&, const SlideComprehension&) = default;
};

struct ComprehensionReport {
  // Corridor order, supplementary slides last.
  std::vector<SlideComprehension> slides;
  std::map<std::string, int> class_totals;
  int responses = 0;
  int raters = 0;
  int flagged_slides = 0;

  const SlideComprehension* find(const SlideRef& ref) const {
    for (const auto& slide : slides) {
      if (slide.slide == ref) return &slide;
    }
    return nullptr;
  }

  friend bool operator==(const ComprehensionReport&, const ComprehensionReport&) = default;
};

namespace detail {

inline std::vector<SlideRef> presentation_order(const TopicMap& map) {
  std::vector<SlideRef> refs;
  for (const auto& [ref, _] : map.occurrences) refs.push_back(ref);
  std::stable_sort(refs.begin(), refs.end(), [&](const SlideRef& a, const SlideRef& b) {
    const auto& oa = map.occurrences.at(a);
    const auto& ob = map.occurrences.at(b);
    auto ka = std::tuple(oa.supplementary(), a.deck_id, oa.ordinal.value_or(0), a.slide_id);
    auto kb = std::tuple(ob.supplementary(), b.deck_id, ob.ordinal.value_or(0), b.slide_id);
    return ka < kb;
  });
  return refs;
}

}  // namespace detail

// Per-slide distribution of effective ratings. A slide is flagged when it has
// at least `quorum` responses and the negative share reaches `threshold`.
inline ComprehensionReport comprehension_report(const AnnotationLog& log, const TopicMap& map,
                                                const ComprehensionClasses& classes,
                                                const ReportOptions& options = {}) {
  options.check();
  auto ratings = effective_ratings(log);

  std::map<SlideRef, SlideComprehension> by_slide;
  for (const auto& ref : detail::presentation_order(map)) {
    SlideComprehension entry{ref, map.occurrences.at(ref).ordinal, {}, 0, 0, false};
    for (const auto& label : classes.labels) entry.counts[label] = 0;
    by_slide.emplace(ref, std::move(entry));
  }

  ComprehensionReport report;
  for (const auto& label : classes.labels) report.class_totals[label] = 0;
  std::set<std::string> raters;
  for (const auto& [key, label] : ratings) {
    auto it = by_slide.find(key.first);
    if (it == by_slide.end()) continue;
    auto& entry = it->second;
    ++entry.counts[label];
    ++entry.total;
    if (classes.negative(label)) ++entry.negative;
    ++report.class_totals[label];
    ++report.responses;
    raters.insert(key.second);
  }
  report.raters = static_cast<int>(raters.size());

  for (const auto& ref : detail::presentation_order(map)) {
    auto& entry = by_slide.at(ref);
    entry.flagged = entry.total >= options.quorum &&
                    static_cast<double>(entry.negative) / entry.total >= options.threshold;
    report.flagged_slides += entry.flagged ? 1 : 0;
    report.slides.push_back(std::move(entry));
  }
  return report;
}

// A crowd-sourced topic and its attachments, applicable to a map.
struct DiscussionTopic {
  SubjectIdentifier id;
  bool is_new = true;
  int support = 0;
  std::set<SlideRef> occurrences;
  std::vector<Association> associations;

  friend bool operator==(const DiscussionTopic&, const DiscussionTopic&) = default;
};

// Tags used by at least `min_support` distinct participants become topics
// attached to every slide they were placed on, with a DISCUSSION edge to each
// lecturer topic of those slides.
inline std::vector<DiscussionTopic> discussion_topics(const AnnotationLog& log, const TopicMap& map,
                                                      int min_support = 2) {
  if (min_support < 1) throw Error(ErrorCode::InvalidConfig, "min_support must be at least 1");
  std::map<std::string, std::set<std::string>> supporters;
  std::map<std::string, std::set<SlideRef>> slides;
  for (const auto& annotation : log) {
    const auto* note = std::get_if<Note>(&annotation.kind);
    if (!note || !map.find_occurrence(annotation.slide)) continue;
    for (const auto& raw : note->tags) {
      std::string tag = normalize_label(raw).str();
      supporters[tag].insert(annotation.participant);
      slides[tag].insert(annotation.slide);
    }
  }

  std::vector<DiscussionTopic> out;
  for (const auto& [tag, who] : supporters) {
    if (static_cast<int>(who.size()) < min_support) continue;
    DiscussionTopic topic;
    topic.id = SubjectIdentifier::unchecked(tag);
    topic.is_new = map.find_topic(topic.id) == nullptr;
    topic.support = static_cast<int>(who.size());
    topic.occurrences = slides[tag];
    for (const auto& ref : topic.occurrences) {
      for (const auto& lecturer_topic : map.occurrences.at(ref).topic_refs) {
        if (lecturer_topic != topic.id) {
          topic.associations.push_back({AssociationType::Discussion, topic.id, lecturer_topic});
        }
      }
    }
    canonicalize(topic.associations);
    out.push_back(std::move(topic));
  }
  return out;
}

// Grows `map` by the delta: new topics are added, existing ones gain
// occurrences. Nothing is removed.
inline TopicMap apply_discussion(TopicMap map, const std::vector<DiscussionTopic>& delta) {
  for (const auto& discussion : delta) {
    Topic& topic = map.topics[discussion.id];
    topic.id = discussion.id;
    topic.display_names.insert(discussion.id.str());
    for (const auto& ref : discussion.occurrences) {
      auto it = map.occurrences.find(ref);
      if (it == map.occurrences.end()) throw Error(ErrorCode::UnknownSlide, "no slide '" + ref.str() + "'");
      if (!it->second.has_topic(discussion.id)) it->second.topic_refs.push_back(discussion.id);
      if (std::find(topic.occurrence_refs.begin(), topic.occurrence_refs.end(), ref) == topic.occurrence_refs.end()) {
        topic.occurrence_refs.push_back(ref);
      }
    }
    std::sort(topic.occurrence_refs.begin(), topic.occurrence_refs.end());
    map.associations.insert(map.associations.end(), discussion.associations.begin(), discussion.associations.end());
  }
  canonicalize(map.associations);
  refresh_scopes(map);
  return map;
}

// |a ∩ b| / |a ∪ b|; nullopt when both sets are empty.
inline std::optional<double> jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  std::size_t total = a.size() + b.size() - common;
  if (total == 0) return std::nullopt;
  return static_cast<double>(common) / static_cast<double>(total);
}

// Similarity of the lecturer's topics and the audience's tags, over the
// whole session or restricted to one slide.
inline std::optional<double> mindset_correlation(const AnnotationLog& log, const TopicMap& map,
                                                 const std::optional<SlideRef>& slide = std::nullopt) {
  std::set<std::string> lecturer;
  if (slide) {
    const Occurrence* occ = map.find_occurrence(*slide);
    if (!occ) throw Error(ErrorCode::UnknownSlide, "no slide '" + slide->str() + "'");
    for (const auto& id : occ->topic_refs) lecturer.insert(id.str());
  } else {
    for (const auto& [id, _] : map.topics) lecturer.insert(id.str());
  }
  std::set<std::string> audience;
  for (const auto& annotation : log) {
    if (slide && annotation.slide != *slide) continue;
    if (const auto* note = std::get_if<Note>(&annotation.kind)) {
      for (const auto& tag : note->tags) audience.insert(normalize_label(tag).str());
    }
  }
  return jaccard(lecturer, audience);
}

inline constexpr std::string_view kLecturerOwner = "LECTURER";

struct BookmarkEntry {
  std::string label;
  SlideRef slide;
  std::optional<int> ordinal;
  // kLecturerOwner for deck checkpoints, else the participant token.
  std::string owner;

  bool lecturer() const { return owner == kLecturerOwner; }
  friend bool operator==(const BookmarkEntry&, const BookmarkEntry&) = default;
};

// Lecturer checkpoints and audience bookmarks ordered by ordinal; ties keep
// checkpoints first, then log order. Supplementary slides sort last.
inline std::vector<BookmarkEntry> bookmarks(const AnnotationLog& log, const TopicMap& map) {
  std::vector<std::pair<std::tuple<int, int, int, std::size_t>, BookmarkEntry>> ranked;
  auto key = [](const Occurrence& occ, int owner_rank, std::size_t position) {
    return std::tuple(occ.supplementary() ? 1 : 0, occ.ordinal.value_or(0), owner_rank, position);
  };
  std::size_t position = 0;
  for (const auto& ref : detail::presentation_order(map)) {
    const Occurrence& occ = map.occurrences.at(ref);
    if (occ.checkpoint) {
      ranked.push_back({key(occ, 0, position++), {*occ.checkpoint, ref, occ.ordinal, std::string(kLecturerOwner)}});
    }
  }
  position = 0;
  for (const auto& annotation : log) {
    const auto* mark = std::get_if<Bookmark>(&annotation.kind);
    const Occurrence* occ = map.find_occurrence(annotation.slide);
    if (!mark || !occ) continue;
    ranked.push_back({key(*occ, 1, position++), {mark->label, annotation.slide, occ->ordinal, annotation.participant}});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<BookmarkEntry> out;
  for (auto& [_, entry] : ranked) out.push_back(std::move(entry));
  return out;
}

// Annotation log lines.

inline Json to_json(const Annotation& annotation) {
  Json out = {{"participant", annotation.participant}, {"slide", annotation.slide.str()}, {"at", annotation.at}};
  if (annotation.seq != 0) out["seq"] = annotation.seq;
  std::visit(
      [&out](const auto& kind) {
        using Kind = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<Kind, Rating>) {
          out["kind"] = "rating";
          out["class"] = kind.comprehension;
        } else if constexpr (std::is_same_v<Kind, Note>) {
          out["kind"] = "note";
          out["text"] = kind.text;
          out["tags"] = kind.tags;
          Json refs = Json::array();
          for (const auto& ref : kind.refs) refs.push_back(ref.str());
          out["refs"] = refs;
        } else {
          out["kind"] = "bookmark";
          out["label"] = kind.label;
        }
      },
      annotation.kind);
  return out;
}

inline Annotation annotation_from_json(const Json& value) {
  using namespace detail;
  if (!value.is_object()) throw Error(ErrorCode::MalformedDocument, "annotation must be a JSON object");
  Annotation annotation;
  annotation.participant = require_string(value, "participant", "annotation");
  annotation.slide = parse_slide_ref(require_string(value, "slide", "annotation"));
  if (value.contains("at")) {
    if (!value.at("at").is_number_integer()) throw Error(ErrorCode::MalformedDocument, "annotation: 'at' must be an integer");
    annotation.at = value.at("at").get<std::int64_t>();
  }
  if (value.contains("seq")) {
    if (!value.at("seq").is_number_unsigned()) throw Error(ErrorCode::MalformedDocument, "annotation: bad 'seq'");
    annotation.seq = value.at("seq").get<std::uint64_t>();
  }
  const std::string kind = require_string(value, "kind", "annotation");
  if (kind == "rating") {
    annotation.kind = Rating{require_string(value, "class", "rating")};
  } else if (kind == "note") {
    Note note;
    if (value.contains("text")) note.text = require_string(value, "text", "note");
    if (value.contains("tags")) {
      for (const auto& tag : require_array(value, "tags", "note")) note.tags.push_back(as_string(tag, "note"));
    }
    if (value.contains("refs")) {
      for (const auto& ref : require_array(value, "refs", "note")) note.refs.push_back(parse_slide_ref(as_string(ref, "note")));
    }
    annotation.kind = std::move(note);
  } else if (kind == "bookmark") {
    annotation.kind = Bookmark{require_string(value, "label", "bookmark")};
  } else {
    throw Error(ErrorCode::MalformedDocument, "unknown annotation kind '" + kind + "'");
  }
  return annotation;
}

// Reads a line-delimited log. Blank lines are skipped.
inline AnnotationLog read_log(std::istream& in) {
  AnnotationLog log;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      log.push_back(annotation_from_json(parse_json_document(line, "annotation")));
    } catch (const Error& e) {
      throw Error(e.code(), "log line " + std::to_string(number) + ": " + e.detail());
    }
  }
  return log;
}

inline Json to_json(const ComprehensionReport& report) {
  Json slides = Json::array();
  for (const auto& slide : report.slides) {
    slides.push_back({{"slide", slide.slide.str()},
                      {"ordinal", slide.ordinal ? Json(*slide.ordinal) : Json(nullptr)},
                      {"counts", slide.counts},
                      {"total", slide.total},
                      {"negative", slide.negative},
                      {"flagged", slide.flagged}});
  }
  return {{"slides", slides},
          {"totals",
           {{"classes", report.class_totals},
            {"responses", report.responses},
            {"raters", report.raters},
            {"flagged_slides", report.flagged_slides}}}};
}

inline Json to_json(const std::vector<DiscussionTopic>& delta) {
  Json out = Json::array();
  for (const auto& topic : delta) {
    Json slides = Json::array();
    for (const auto& ref : topic.occurrences) slides.push_back(ref.str());
    Json edges = Json::array();
    for (const auto& assoc : topic.associations) edges.push_back({{"SOURCE", assoc.from.str()}, {"TARGET", assoc.to.str()}});
    out.push_back({{"topic", topic.id.str()},
                   {"new", topic.is_new},
                   {"support", topic.support},
                   {"occurrences", slides},
                   {"associations", edges}});
  }
  return out;
}

inline Json mindset_json(const std::optional<double>& score) {
  if (!score) return {{"score", nullptr}, {"status", "NO_DATA"}};
  return {{"score", *score}, {"status", "OK"}};
}

inline Json to_json(const std::vector<BookmarkEntry>& entries) {
  Json out = Json::array();
  for (const auto& entry : entries) {
    out.push_back({{"label", entry.label},
                   {"slide", entry.slide.str()},
                   {"ordinal", entry.ordinal ? Json(*entry.ordinal) : Json(nullptr)},
                   {"owner", entry.owner}});
  }
  return out;
}

}  // namespace lecmap
