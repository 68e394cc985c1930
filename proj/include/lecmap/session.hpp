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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lecmap/crowd.hpp"
#include "lecmap/deck.hpp"
#include "lecmap/error.hpp"
#include "lecmap/graph_ops.hpp"
#include "lecmap/model.hpp"
#include "lecmap/query.hpp"
#include "lecmap/serialize.hpp"
#include "lecmap/storage.hpp"
#include "lecmap/validate.hpp"

namespace lecmap {

struct SessionConfig {
  ComprehensionClasses classes;
  ReportOptions report;
  int min_support = 2;
  // When false the audience only sees corridor slides up to the position.
  bool reveal_future = false;
  // Required when the map holds more than one corridor.
  std::optional<std::string> deck_id;

  void check() const {
    classes.check();
    report.check();
    if (min_support < 1) throw Error(ErrorCode::InvalidConfig, "min_support must be at least 1");
  }
};

enum class SessionState { Created, Live, Ended };

constexpr std::string_view state_name(SessionState state) {
  switch (state) {
    case SessionState::Created: return "CREATED";
    case SessionState::Live: return "LIVE";
    case SessionState::Ended: return "ENDED";
  }
  return "CREATED";
}

inline SessionState parse_state(std::string_view text) {
  if (text == "CREATED") return SessionState::Created;
  if (text == "LIVE") return SessionState::Live;
  if (text == "ENDED") return SessionState::Ended;
  throw Error(ErrorCode::MalformedDocument, "unknown session state '" + std::string(text) + "'");
}

struct SessionEvent {
  std::uint64_t seq = 0;
  std::string type;
  Json data;
};

// Read-only copy of a session's state.
struct SessionInfo {
  std::string session_id;
  std::string map_id;
  std::string deck_id;
  SessionState state = SessionState::Created;
  int position = 1;
  int corridor_length = 0;
  std::size_t participants = 0;
  std::size_t annotations = 0;
  SessionConfig config;
};

inline Json to_json(const SessionConfig& config) {
  Json out = {{"classes", config.classes.labels},
              {"positive", config.classes.positive},
              {"quorum", config.report.quorum},
              {"threshold", config.report.threshold},
              {"min_support", config.min_support},
              {"reveal_future", config.reveal_future}};
  if (config.deck_id) out["deck_id"] = *config.deck_id;
  return out;
}

// Missing fields keep their defaults.
inline SessionConfig session_config_from_json(const Json& value) {
  SessionConfig config;
  if (value.is_null()) return config;
  if (!value.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be an object");
  try {
    if (value.contains("classes")) {
      config.classes.labels = value.at("classes").get<std::vector<std::string>>();
      if (!value.contains("positive") && !config.classes.labels.empty()) {
        config.classes.positive = config.classes.labels.front();
      }
    }
    if (value.contains("positive")) config.classes.positive = value.at("positive").get<std::string>();
    if (value.contains("quorum")) config.report.quorum = value.at("quorum").get<int>();
    if (value.contains("threshold")) config.report.threshold = value.at("threshold").get<double>();
    if (value.contains("min_support")) config.min_support = value.at("min_support").get<int>();
    if (value.contains("reveal_future")) config.reveal_future = value.at("reveal_future").get<bool>();
    if (value.contains("deck_id")) config.deck_id = value.at("deck_id").get<std::string>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return config;
}

inline Json to_json(const SessionInfo& info) {
  return {{"session_id", info.session_id},
          {"map_id", info.map_id},
          {"deck_id", info.deck_id},
          {"state", state_name(info.state)},
          {"position", info.position},
          {"corridor_length", info.corridor_length},
          {"participants", info.participants},
          {"annotations", info.annotations},
          {"config", to_json(info.config)}};
}

// Owns topic maps and live sessions. Each session serializes its mutations
// behind its own mutex; map storage is guarded separately. With a data
// directory every accepted change is on disk before the call returns, and
// constructing a service over the same directory restores all state.
class SessionService {
 public:
  explicit SessionService(std::optional<std::filesystem::path> data_dir = std::nullopt)
      : data_dir_(std::move(data_dir)), rng_(std::random_device{}()) {
    if (data_dir_) {
      for (const char* sub : {"maps", "sessions", "annotations"}) {
        std::filesystem::create_directories(*data_dir_ / sub);
      }
      load();
    }
  }

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  ~SessionService() { shutdown(); }

  // Wakes every blocked event reader; used when the server stops.
  void shutdown() {
    std::vector<Slot*> slots;
    {
      std::lock_guard lock(sessions_mutex_);
      stopping_ = true;
      for (auto& [_, slot] : sessions_) slots.push_back(slot.get());
    }
    for (Slot* slot : slots) {
      std::lock_guard lock(slot->mutex);
      slot->changed.notify_all();
    }
  }

  // Maps.

  std::string add_map(TopicMap map) {
    if (map.map_id.empty()) throw Error(ErrorCode::InvalidMap, "map_id is empty");
    if (auto violations = validate(map); !violations.empty()) {
      throw Error(ErrorCode::InvalidMap, violations.front());
    }
    std::unique_lock lock(maps_mutex_);
    if (maps_.count(map.map_id)) throw Error(ErrorCode::MapExists, "map '" + map.map_id + "' already exists");
    if (data_dir_) storage::write_file_atomic(map_path(map.map_id), serialize(map));
    std::string id = map.map_id;
    maps_.emplace(id, std::make_shared<const TopicMap>(std::move(map)));
    return id;
  }

  std::string ingest_deck(std::string_view document) { return add_map(build_map(parse_deck(document))); }

  std::shared_ptr<const TopicMap> get_map(const std::string& map_id) const {
    std::shared_lock lock(maps_mutex_);
    auto it = maps_.find(map_id);
    if (it == maps_.end()) throw Error(ErrorCode::UnknownMap, "no map '" + map_id + "'");
    return it->second;
  }

  std::string merge_maps(const std::string& a, const std::string& b) {
    return add_map(merge(*get_map(a), *get_map(b)));
  }

  std::vector<std::string> map_ids() const {
    std::shared_lock lock(maps_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, _] : maps_) ids.push_back(id);
    return ids;
  }

  // Session lifecycle.

  SessionInfo create_session(const std::string& map_id, SessionConfig config,
                             std::optional<std::string> session_id = std::nullopt) {
    auto map = get_map(map_id);
    config.check();
    std::string deck_id;
    if (config.deck_id) {
      deck_id = *config.deck_id;
      if (!map->corridors.count(deck_id)) throw Error(ErrorCode::InvalidConfig, "map has no deck '" + deck_id + "'");
    } else if (map->corridors.size() == 1) {
      deck_id = map->corridors.begin()->first;
    } else {
      throw Error(ErrorCode::InvalidConfig, "map has several decks; config.deck_id is required");
    }
    if (map->corridors.at(deck_id).empty()) throw Error(ErrorCode::InvalidConfig, "deck '" + deck_id + "' has no corridor");
    config.deck_id = deck_id;

    std::lock_guard lock(sessions_mutex_);
    std::string id;
    if (session_id) {
      id = *session_id;
      if (id.empty() || id.find_first_of("/\\.") != std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "bad session id '" + id + "'");
      }
      if (sessions_.count(id)) throw Error(ErrorCode::InvalidConfig, "session '" + id + "' already exists");
    } else {
      do {
        id = "session-" + std::to_string(++session_counter_);
      } while (sessions_.count(id));
    }
    auto slot = std::make_unique<Slot>();
    slot->id = id;
    slot->map = map;
    slot->map_id = map_id;
    slot->deck_id = deck_id;
    slot->config = std::move(config);
    open_files(*slot);
    persist(*slot);
    SessionInfo info = info_of(*slot);
    sessions_.emplace(id, std::move(slot));
    return info;
  }

  SessionInfo session(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    return info_of(slot);
  }

  std::vector<std::string> session_ids() const {
    std::lock_guard lock(sessions_mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, _] : sessions_) ids.push_back(id);
    return ids;
  }

  SessionInfo start(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    if (slot.state != SessionState::Created) {
      throw Error(ErrorCode::InvalidState, "session '" + id + "' is " + std::string(state_name(slot.state)));
    }
    slot.state = SessionState::Live;
    persist(slot);
    emit(slot, "SlideChanged", slide_changed(slot));
    return info_of(slot);
  }

  // Moves to the next corridor slide.
  SessionInfo advance(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    return move_to(slot, slot.position + 1);
  }

  // Jumps to `ordinal`; backward jumps are allowed.
  SessionInfo go_to(const std::string& id, int ordinal) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    return move_to(slot, ordinal);
  }

  SessionInfo end(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    if (slot.state != SessionState::Live) {
      throw Error(ErrorCode::SessionNotLive, "session '" + id + "' is " + std::string(state_name(slot.state)));
    }
    slot.state = SessionState::Ended;
    persist(slot);
    emit(slot, "SessionEnded", {{"annotations", slot.log.size()}});
    return info_of(slot);
  }

  std::string join(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    if (slot.state == SessionState::Ended) throw Error(ErrorCode::SessionEnded, "session '" + id + "' has ended");
    std::string token;
    do {
      token = fresh_token();
    } while (slot.participants.count(token));
    slot.participants.insert(token);
    persist(slot);
    return token;
  }

  // The slide on screen plus its anchors.
  Json current(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    const SlideRef& ref = corridor_of(slot).at(static_cast<std::size_t>(slot.position - 1));
    const Occurrence& occ = slot.map->occurrences.at(ref);
    Json anchors = Json::array();
    for (const auto& topic : occ.topic_refs) anchors.push_back(topic.str());
    Json slide = {{"slide", ref.str()},
                  {"ordinal", slot.position},
                  {"title", occ.title},
                  {"body", occ.body},
                  {"class", class_name(occ.occurrence_class)},
                  {"anchors", anchors}};
    if (occ.checkpoint) slide["checkpoint"] = *occ.checkpoint;
    return {{"session_id", slot.id},
            {"state", state_name(slot.state)},
            {"position", slot.position},
            {"corridor_length", corridor_of(slot).size()},
            {"current", slide}};
  }

  // Validates, persists and sequences one annotation. Returns its sequence
  // number; numbers increase strictly per session.
  std::uint64_t submit(const std::string& id, const std::string& token, Annotation annotation) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    if (!slot.participants.count(token)) throw Error(ErrorCode::UnknownParticipant, "unknown participant token");
    annotation.participant = token;
    annotation.seq = slot.next_seq;
    if (annotation.at == 0) {
      annotation.at = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count();
    }
    apply_annotation(slot.log, std::move(annotation), *slot.map, slot.config.classes,
                     slot.state == SessionState::Live);
    const Annotation& accepted = slot.log.back();
    if (data_dir_) {
      try {
        slot.annotation_file.append_line(to_json(accepted).dump());
      } catch (...) {
        slot.log.pop_back();
        throw;
      }
    }
    ++slot.next_seq;
    const char* kind = std::holds_alternative<Rating>(accepted.kind)  ? "rating"
                       : std::holds_alternative<Note>(accepted.kind) ? "note"
                                                                     : "bookmark";
    emit(slot, "AnnotationAccepted",
         {{"annotation_seq", accepted.seq}, {"kind", kind}, {"slide", accepted.slide.str()},
          {"total", slot.log.size()}});
    return accepted.seq;
  }

  std::vector<AssistanceItem> assistance(const std::string& id, const std::string& slide_text) {
    auto [map, log, info] = snapshot(id);
    SlideRef ref = resolve_slide(*map, slide_text);
    auto items = lecmap::assistance(*map, ref);
    if (!info.config.reveal_future) {
      std::erase_if(items, [&](const AssistanceItem& item) {
        const Occurrence& occ = map->occurrences.at(item.slide);
        return item.slide.deck_id == info.deck_id && occ.ordinal && *occ.ordinal > info.position;
      });
    }
    return items;
  }

  ComprehensionReport report(const std::string& id) {
    auto [map, log, info] = snapshot(id);
    return comprehension_report(log, *map, info.config.classes, info.config.report);
  }

  std::optional<double> mindset(const std::string& id, const std::optional<std::string>& slide = std::nullopt) {
    auto [map, log, info] = snapshot(id);
    std::optional<SlideRef> ref;
    if (slide) ref = resolve_slide(*map, *slide);
    return mindset_correlation(log, *map, ref);
  }

  std::vector<DiscussionTopic> discussion(const std::string& id) {
    auto [map, log, info] = snapshot(id);
    return discussion_topics(log, *map, info.config.min_support);
  }

  std::vector<BookmarkEntry> session_bookmarks(const std::string& id) {
    auto [map, log, info] = snapshot(id);
    return bookmarks(log, *map);
  }

  AnnotationLog log(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    return slot.log;
  }

  struct EventBatch {
    std::vector<SessionEvent> events;
    // No further events will follow (session ended or service stopping).
    bool closed = false;
  };

  // Events with seq > `since`, waiting up to `wait` for at least one.
  EventBatch events_since(const std::string& id, std::uint64_t since,
                          std::chrono::milliseconds wait = std::chrono::milliseconds(0)) {
    Slot& slot = find(id);
    std::unique_lock lock(slot.mutex);
    auto ready = [&] { return slot.events.size() > since || slot.state == SessionState::Ended || stopping(); };
    if (wait.count() > 0) slot.changed.wait_for(lock, wait, ready);
    EventBatch batch;
    for (std::size_t i = since; i < slot.events.size(); ++i) batch.events.push_back(slot.events[i]);
    batch.closed = slot.state == SessionState::Ended || stopping();
    return batch;
  }

 private:
  struct Slot {
    std::mutex mutex;
    std::condition_variable changed;
    std::string id;
    std::string map_id;
    std::string deck_id;
    std::shared_ptr<const TopicMap> map;
    SessionConfig config;
    SessionState state = SessionState::Created;
    int position = 1;
    std::set<std::string> participants;
    AnnotationLog log;
    std::uint64_t next_seq = 1;
    std::vector<SessionEvent> events;
    storage::AppendFile annotation_file;
    storage::AppendFile event_file;
  };

  std::string fresh_token() {
    std::lock_guard lock(rng_mutex_);
    std::ostringstream out;
    out << "p-" << std::hex << rng_() << rng_();
    return out.str();
  }

  bool stopping() const {
    std::lock_guard lock(sessions_mutex_);
    return stopping_;
  }

  Slot& find(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
    return *it->second;
  }

  const std::vector<SlideRef>& corridor_of(const Slot& slot) const { return slot.map->corridors.at(slot.deck_id); }

  SessionInfo info_of(const Slot& slot) const {
    return {slot.id,
            slot.map_id,
            slot.deck_id,
            slot.state,
            slot.position,
            static_cast<int>(corridor_of(slot).size()),
            slot.participants.size(),
            slot.log.size(),
            slot.config};
  }

  std::tuple<std::shared_ptr<const TopicMap>, AnnotationLog, SessionInfo> snapshot(const std::string& id) {
    Slot& slot = find(id);
    std::lock_guard lock(slot.mutex);
    return {slot.map, slot.log, info_of(slot)};
  }

  Json slide_changed(const Slot& slot) const {
    return {{"position", slot.position},
            {"slide", corridor_of(slot).at(static_cast<std::size_t>(slot.position - 1)).str()}};
  }

  SessionInfo move_to(Slot& slot, int ordinal) {
    if (slot.state != SessionState::Live) {
      throw Error(ErrorCode::SessionNotLive, "session '" + slot.id + "' is " + std::string(state_name(slot.state)));
    }
    const int length = static_cast<int>(corridor_of(slot).size());
    if (ordinal < 1 || ordinal > length) {
      throw Error(ErrorCode::OutOfBounds,
                  "ordinal " + std::to_string(ordinal) + " outside [1, " + std::to_string(length) + "]");
    }
    slot.position = ordinal;
    persist(slot);
    emit(slot, "SlideChanged", slide_changed(slot));
    return info_of(slot);
  }

  void emit(Slot& slot, std::string type, Json data) {
    SessionEvent event{slot.events.size() + 1, std::move(type), std::move(data)};
    if (data_dir_) {
      slot.event_file.append_line(Json{{"seq", event.seq}, {"type", event.type}, {"data", event.data}}.dump());
    }
    slot.events.push_back(std::move(event));
    slot.changed.notify_all();
  }

  std::filesystem::path map_path(const std::string& id) const { return *data_dir_ / "maps" / (id + ".json"); }
  std::filesystem::path session_path(const std::string& id) const {
    return *data_dir_ / "sessions" / (id + ".json");
  }
  std::filesystem::path events_path(const std::string& id) const {
    return *data_dir_ / "sessions" / (id + ".events.jsonl");
  }
  std::filesystem::path annotations_path(const std::string& id) const {
    return *data_dir_ / "annotations" / (id + ".jsonl");
  }

  void open_files(Slot& slot) {
    if (!data_dir_) return;
    slot.annotation_file = storage::AppendFile(annotations_path(slot.id));
    slot.event_file = storage::AppendFile(events_path(slot.id));
  }

  void persist(const Slot& slot) {
    if (!data_dir_) return;
    Json doc = {{"session_id", slot.id},
                {"map_id", slot.map_id},
                {"deck_id", slot.deck_id},
                {"state", state_name(slot.state)},
                {"position", slot.position},
                {"participants", slot.participants},
                {"config", to_json(slot.config)}};
    storage::write_file_atomic(session_path(slot.id), doc.dump(2) + "\n");
  }

  void load() {
    namespace fs = std::filesystem;
    for (const auto& entry : fs::directory_iterator(*data_dir_ / "maps")) {
      if (entry.path().extension() != ".json") continue;
      TopicMap map = parse_topic_map(storage::read_file(entry.path()));
      std::string id = map.map_id;
      maps_.emplace(id, std::make_shared<const TopicMap>(std::move(map)));
    }
    for (const auto& entry : fs::directory_iterator(*data_dir_ / "sessions")) {
      const std::string name = entry.path().filename().string();
      if (entry.path().extension() != ".json" || name.ends_with(".tmp")) continue;
      Json doc = parse_json_document(storage::read_file(entry.path()), name);
      auto slot = std::make_unique<Slot>();
      slot->id = doc.at("session_id").get<std::string>();
      slot->map_id = doc.at("map_id").get<std::string>();
      slot->deck_id = doc.at("deck_id").get<std::string>();
      slot->state = parse_state(doc.at("state").get<std::string>());
      slot->position = doc.at("position").get<int>();
      slot->participants = doc.at("participants").get<std::set<std::string>>();
      slot->config = session_config_from_json(doc.at("config"));
      auto map = maps_.find(slot->map_id);
      if (map == maps_.end()) throw Error(ErrorCode::UnknownMap, "session '" + slot->id + "' needs missing map");
      slot->map = map->second;

      if (fs::exists(annotations_path(slot->id))) {
        std::istringstream in(storage::read_file(annotations_path(slot->id)));
        slot->log = read_log(in);
        for (const auto& annotation : slot->log) slot->next_seq = std::max(slot->next_seq, annotation.seq + 1);
      }
      if (fs::exists(events_path(slot->id))) {
        std::istringstream in(storage::read_file(events_path(slot->id)));
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          Json event = parse_json_document(line, "event");
          slot->events.push_back({event.at("seq").get<std::uint64_t>(), event.at("type").get<std::string>(),
                                  event.at("data")});
        }
      }
      open_files(*slot);
      if (slot->id.starts_with("session-")) {
        try {
          session_counter_ = std::max<std::uint64_t>(session_counter_, std::stoull(slot->id.substr(8)));
        } catch (const std::exception&) {
        }
      }
      std::string id = slot->id;
      sessions_.emplace(std::move(id), std::move(slot));
    }
  }

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex maps_mutex_;
  std::map<std::string, std::shared_ptr<const TopicMap>> maps_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> sessions_;
  std::uint64_t session_counter_ = 0;
  bool stopping_ = false;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace lecmap
