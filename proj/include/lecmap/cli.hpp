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

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>

#include "lecmap/crowd.hpp"
#include "lecmap/deck.hpp"
#include "lecmap/error.hpp"
#include "lecmap/graph_ops.hpp"
#include "lecmap/http_service.hpp"
#include "lecmap/query.hpp"
#include "lecmap/serialize.hpp"
#include "lecmap/session.hpp"
#include "lecmap/storage.hpp"
#include "lecmap/validate.hpp"

namespace lecmap::cli {

inline TopicMap load_map(const std::string& path) {
  TopicMap map = parse_topic_map(storage::read_file(path));
  if (auto violations = validate(map); !violations.empty()) {
    throw Error(ErrorCode::InvalidMap, path + ": " + violations.front());
  }
  return map;
}

// Reads a session log and re-checks every entry against the map.
inline AnnotationLog load_log(const std::string& path, const TopicMap& map, const ComprehensionClasses& classes) {
  std::istringstream in(storage::read_file(path));
  AnnotationLog checked;
  for (auto& annotation : read_log(in)) apply_annotation(checked, std::move(annotation), map, classes);
  return checked;
}

inline void emit_map(const TopicMap& map, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << serialize(map);
    return;
  }
  storage::write_file_atomic(output, serialize(map));
  std::size_t temporal = 0;
  for (const auto& assoc : map.associations) temporal += assoc.type == AssociationType::TemporalContinuity;
  out << Json{{"map_id", map.map_id},
              {"output", output},
              {"topics", map.topics.size()},
              {"occurrences", map.occurrences.size()},
              {"associations", map.associations.size()},
              {"scopes", map.scopes.size()}}
             .dump()
      << "\n";
}

// Blocks until SIGINT or SIGTERM, then stops the server.
inline int serve(int port, const std::string& data_dir, const std::string& host, std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SessionService service{std::filesystem::path(data_dir)};
  HttpService http(service);
  std::thread waiter([&] {
    int received = 0;
    sigwait(&signals, &received);
    http.stop();
  });
  out << Json{{"listening", host + ":" + std::to_string(port)}, {"data", data_dir}}.dump() << std::endl;
  bool ok = http.listen(host, port);
  if (!ok) {
    pthread_kill(waiter.native_handle(), SIGTERM);
  }
  waiter.join();
  if (!ok) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

// Entry point of the `lecmap` tool. Exit codes: 0 success, 1 domain error
// (error JSON on `err`), 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Topic map engine for annotated lecture decks", "lecmap"};
  app.require_subcommand(1);

  std::string deck_path, output, map_path, map_a, map_b, slide, topic, deck_id, log_path, data_dir;
  std::string host = "0.0.0.0";
  int max_len = 3;
  int port = 8080;
  ReportOptions report_options;
  int min_support = 2;

  auto* ingest = app.add_subcommand("ingest", "Build a topic map from an annotated deck");
  ingest->add_option("deck", deck_path, "Annotated deck JSON")->required();
  ingest->add_option("-o,--output", output, "Output map file (stdout when omitted)");

  auto* merge_cmd = app.add_subcommand("merge", "Merge two topic maps by subject identifier");
  merge_cmd->add_option("a", map_a, "First map")->required();
  merge_cmd->add_option("b", map_b, "Second map")->required();
  merge_cmd->add_option("-o,--output", output, "Output map file (stdout when omitted)");

  auto* query = app.add_subcommand("query", "Assistance and navigation queries");
  query->require_subcommand(1);
  auto* q_assist = query->add_subcommand("assistance", "Auxiliary slides for a slide");
  q_assist->add_option("--map", map_path)->required();
  q_assist->add_option("--slide", slide, "slide id or deck/slide")->required();
  auto* q_closure = query->add_subcommand("closure", "Transitive prerequisites of a topic");
  q_closure->add_option("--map", map_path)->required();
  q_closure->add_option("--topic", topic)->required();
  auto* q_paths = query->add_subcommand("paths", "Approaching paths into a topic");
  q_paths->add_option("--map", map_path)->required();
  q_paths->add_option("--topic", topic)->required();
  q_paths->add_option("--max-len", max_len)->check(CLI::PositiveNumber);

  auto* corridor_cmd = app.add_subcommand("corridor", "Linear slide order of a deck");
  corridor_cmd->add_option("--map", map_path)->required();
  corridor_cmd->add_option("--deck", deck_id)->required();

  auto* report_cmd = app.add_subcommand("report", "Comprehension report from a session log");
  report_cmd->add_option("--map", map_path)->required();
  report_cmd->add_option("--log", log_path)->required();
  report_cmd->add_option("--quorum", report_options.quorum)->check(CLI::PositiveNumber);
  report_cmd->add_option("--threshold", report_options.threshold);

  auto* mindset_cmd = app.add_subcommand("mindset", "Lecturer/audience mindset correlation");
  mindset_cmd->add_option("--map", map_path)->required();
  mindset_cmd->add_option("--log", log_path)->required();
  mindset_cmd->add_option("--slide", slide, "restrict to one slide");

  auto* discussion_cmd = app.add_subcommand("discussion", "Crowd-sourced discussion topics");
  discussion_cmd->add_option("--map", map_path)->required();
  discussion_cmd->add_option("--log", log_path)->required();
  discussion_cmd->add_option("--min-support", min_support)->check(CLI::PositiveNumber);

  auto* bookmarks_cmd = app.add_subcommand("bookmarks", "Checkpoints and audience bookmarks");
  bookmarks_cmd->add_option("--map", map_path)->required();
  bookmarks_cmd->add_option("--log", log_path)->required();

  auto* serve_cmd = app.add_subcommand("serve", "Run the live session HTTP service");
  serve_cmd->add_option("--port", port)->required();
  serve_cmd->add_option("--data", data_dir)->required();
  serve_cmd->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  auto print = [&out](const Json& value) { out << value.dump() << "\n"; };
  const ComprehensionClasses classes;
  try {
    if (*ingest) {
      emit_map(build_map(parse_deck(storage::read_file(deck_path))), output, out);
    } else if (*merge_cmd) {
      emit_map(merge(load_map(map_a), load_map(map_b)), output, out);
    } else if (*q_assist) {
      TopicMap map = load_map(map_path);
      print(to_json(assistance(map, resolve_slide(map, slide))));
    } else if (*q_closure) {
      print(to_json(preliminary_closure(load_map(map_path), normalize_label(topic))));
    } else if (*q_paths) {
      print(to_json(approaching_paths(load_map(map_path), normalize_label(topic), max_len)));
    } else if (*corridor_cmd) {
      print(to_json(corridor(load_map(map_path), deck_id)));
    } else if (*report_cmd) {
      TopicMap map = load_map(map_path);
      print(to_json(comprehension_report(load_log(log_path, map, classes), map, classes, report_options)));
    } else if (*mindset_cmd) {
      TopicMap map = load_map(map_path);
      std::optional<SlideRef> ref;
      if (!slide.empty()) ref = resolve_slide(map, slide);
      print(mindset_json(mindset_correlation(load_log(log_path, map, classes), map, ref)));
    } else if (*discussion_cmd) {
      TopicMap map = load_map(map_path);
      print(to_json(discussion_topics(load_log(log_path, map, classes), map, min_support)));
    } else if (*bookmarks_cmd) {
      TopicMap map = load_map(map_path);
      print(to_json(bookmarks(load_log(log_path, map, classes), map)));
    } else if (*serve_cmd) {
      return serve(port, data_dir, host, out);
    }
  } catch (const Error& e) {
    err << Json{{"error", e.name()}, {"detail", e.detail()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lecmap::cli
