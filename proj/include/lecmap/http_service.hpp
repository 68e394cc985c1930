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
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <httplib.h>

#include "lecmap/crowd.hpp"
#include "lecmap/error.hpp"
#include "lecmap/serialize.hpp"
#include "lecmap/session.hpp"

namespace lecmap {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownMap:
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownSlide:
    case ErrorCode::UnknownTopic:
    case ErrorCode::UnknownDeck: return 404;
    case ErrorCode::UnknownParticipant: return 403;
    case ErrorCode::MapExists:
    case ErrorCode::DeckCollision:
    case ErrorCode::InvalidState:
    case ErrorCode::SessionNotLive:
    case ErrorCode::SessionEnded:
    case ErrorCode::OutOfBounds: return 409;
    case ErrorCode::IoError: return 500;
    default: return 400;
  }
}

// HTTP + JSON front end over a SessionService. Every error response carries
// {"error": <code name>, "detail": <text>}.
class HttpService {
 public:
  explicit HttpService(SessionService& service, std::size_t worker_threads = 96)
      : service_(service) {
    server_.new_task_queue = [worker_threads] { return new httplib::ThreadPool(worker_threads); };
    routes();
  }

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  int bind_to_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  bool is_running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

  void stop() {
    service_.shutdown();
    server_.stop();
  }

 private:
  using Request = httplib::Request;
  using Response = httplib::Response;
  using Handler = std::function<Json(const Request&, Response&)>;

  static void send(Response& res, const Json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  // Runs `handler`, mapping domain errors to their JSON error body.
  static httplib::Server::Handler wrap(Handler handler) {
    return [handler = std::move(handler)](const Request& req, Response& res) {
      try {
        Json body = handler(req, res);
        if (!body.is_discarded()) send(res, body, res.status == -1 ? 200 : res.status);
      } catch (const Error& e) {
        send(res, {{"error", e.name()}, {"detail", e.detail()}}, http_status(e.code()));
      } catch (const Json::exception& e) {
        send(res, {{"error", code_name(ErrorCode::MalformedDocument)}, {"detail", e.what()}}, 400);
      } catch (const std::exception& e) {
        send(res, {{"error", "Internal"}, {"detail", e.what()}}, 500);
      }
    };
  }

  static Json body_of(const Request& req) {
    if (req.body.empty()) return Json::object();
    return parse_json_document(req.body, "request body");
  }

  static std::string string_field(const Json& body, const char* key) {
    if (!body.is_object() || !body.contains(key) || !body.at(key).is_string()) {
      throw Error(ErrorCode::MalformedDocument, std::string("request needs string field '") + key + "'");
    }
    return body.at(key).get<std::string>();
  }

  static std::string session_id(const Request& req) { return req.matches[1].str(); }

  void routes() {
    server_.Post("/maps", wrap([this](const Request& req, Response& res) -> Json {
      Json body = body_of(req);
      std::string id;
      if (body.contains("slides")) {
        id = service_.ingest_deck(req.body);
      } else if (body.contains("topics")) {
        id = service_.add_map(topic_map_from_json(body));
      } else {
        throw Error(ErrorCode::MalformedDocument, "body is neither a deck nor a topic map");
      }
      res.status = 201;
      return {{"map_id", id}};
    }));

    server_.Post("/maps/merge", wrap([this](const Request& req, Response& res) -> Json {
      Json body = body_of(req);
      std::string id = service_.merge_maps(string_field(body, "a"), string_field(body, "b"));
      res.status = 201;
      return {{"map_id", id}};
    }));

    server_.Get("/maps", wrap([this](const Request&, Response&) -> Json { return service_.map_ids(); }));

    server_.Get(R"(/maps/([^/]+))", wrap([this](const Request& req, Response&) -> Json {
      return to_json(*service_.get_map(req.matches[1].str()));
    }));

    server_.Post("/sessions", wrap([this](const Request& req, Response& res) -> Json {
      Json body = body_of(req);
      std::optional<std::string> id;
      if (body.contains("session_id")) id = string_field(body, "session_id");
      SessionConfig config = session_config_from_json(body.value("config", Json()));
      SessionInfo info = service_.create_session(string_field(body, "map_id"), std::move(config), id);
      res.status = 201;
      return to_json(info);
    }));

    server_.Get(R"(/sessions/([^/]+))", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.session(session_id(req)));
    }));
    server_.Post(R"(/sessions/([^/]+)/start)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.start(session_id(req)));
    }));
    server_.Post(R"(/sessions/([^/]+)/advance)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.advance(session_id(req)));
    }));
    server_.Post(R"(/sessions/([^/]+)/goto/(-?\d+))", wrap([this](const Request& req, Response&) -> Json {
      int ordinal = 0;
      try {
        ordinal = std::stoi(req.matches[2].str());
      } catch (const std::exception&) {
        throw Error(ErrorCode::OutOfBounds, "ordinal out of range");
      }
      return to_json(service_.go_to(session_id(req), ordinal));
    }));
    server_.Post(R"(/sessions/([^/]+)/end)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.end(session_id(req)));
    }));
    server_.Post(R"(/sessions/([^/]+)/join)", wrap([this](const Request& req, Response& res) -> Json {
      std::string token = service_.join(session_id(req));
      res.status = 201;
      return {{"token", token}};
    }));
    server_.Get(R"(/sessions/([^/]+)/current)", wrap([this](const Request& req, Response&) -> Json {
      return service_.current(session_id(req));
    }));

    server_.Post(R"(/sessions/([^/]+)/annotations)", wrap([this](const Request& req, Response& res) -> Json {
      const std::string id = session_id(req);
      Json body = body_of(req);
      const std::string token = string_field(body, "token");
      auto info = service_.session(id);
      auto map = service_.get_map(info.map_id);
      // Bare slide ids are resolved against the session's map.
      body["slide"] = resolve_slide(*map, string_field(body, "slide")).str();
      if (body.contains("refs") && body["refs"].is_array()) {
        for (auto& ref : body["refs"]) {
          if (ref.is_string()) ref = resolve_slide(*map, ref.get<std::string>()).str();
        }
      }
      body["participant"] = token;
      body.erase("seq");
      std::uint64_t seq = service_.submit(id, token, annotation_from_json(body));
      res.status = 201;
      return {{"seq", seq}};
    }));

    server_.Get(R"(/sessions/([^/]+)/assistance)", wrap([this](const Request& req, Response&) -> Json {
      if (!req.has_param("slide")) throw Error(ErrorCode::MalformedDocument, "missing query parameter 'slide'");
      return to_json(service_.assistance(session_id(req), req.get_param_value("slide")));
    }));
    server_.Get(R"(/sessions/([^/]+)/report)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.report(session_id(req)));
    }));
    server_.Get(R"(/sessions/([^/]+)/mindset)", wrap([this](const Request& req, Response&) -> Json {
      std::optional<std::string> slide;
      if (req.has_param("slide")) slide = req.get_param_value("slide");
      return mindset_json(service_.mindset(session_id(req), slide));
    }));
    server_.Get(R"(/sessions/([^/]+)/discussion-topics)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.discussion(session_id(req)));
    }));
    server_.Get(R"(/sessions/([^/]+)/bookmarks)", wrap([this](const Request& req, Response&) -> Json {
      return to_json(service_.session_bookmarks(session_id(req)));
    }));

    server_.Get(R"(/sessions/([^/]+)/events)", wrap([this](const Request& req, Response& res) -> Json {
      const std::string id = session_id(req);
      service_.session(id);
      std::uint64_t since = 0;
      std::string since_text = req.has_param("since") ? req.get_param_value("since")
                                                      : req.get_header_value("Last-Event-ID");
      if (!since_text.empty()) {
        try {
          since = std::stoull(since_text);
        } catch (const std::exception&) {
          throw Error(ErrorCode::MalformedDocument, "bad 'since' value");
        }
      }
      const bool follow = req.get_param_value("follow") != "0";
      auto cursor = std::make_shared<std::uint64_t>(since);
      res.status = 200;
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream", [this, id, cursor, follow](std::size_t, httplib::DataSink& sink) {
            auto batch = service_.events_since(id, *cursor, follow ? std::chrono::milliseconds(250)
                                                                   : std::chrono::milliseconds(0));
            for (const auto& event : batch.events) {
              Json record = {{"seq", event.seq}, {"type", event.type}, {"data", event.data}};
              std::string chunk = "id: " + std::to_string(event.seq) + "\nevent: " + event.type +
                                  "\ndata: " + record.dump() + "\n\n";
              if (!sink.write(chunk.data(), chunk.size())) return false;
              *cursor = event.seq;
            }
            if (batch.closed || !follow) {
              sink.done();
              return true;
            }
            if (batch.events.empty()) {
              static constexpr char kPing[] = ": ping\n\n";
              if (!sink.write(kPing, sizeof(kPing) - 1)) return false;
            }
            return true;
          });
      return Json(Json::value_t::discarded);
    }));
  }

  SessionService& service_;
  httplib::Server server_;
};

}  // namespace lecmap
