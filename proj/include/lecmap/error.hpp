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

#include <stdexcept>
#include <string>
#include <string_view>

namespace lecmap {

// Machine-readable failure categories. The names double as the `error`
// field of HTTP responses and as the CLI's error output.
enum class ErrorCode {
  EmptyLabel,
  MalformedDocument,
  UnknownClass,
  DuplicateSlideId,
  DanglingReference,
  DeckCollision,
  UnknownSlide,
  UnknownTopic,
  UnknownDeck,
  CycleDetected,
  SessionNotLive,
  SessionEnded,
  UnknownMap,
  UnknownSession,
  UnknownParticipant,
  InvalidConfig,
  InvalidMap,
  InvalidState,
  MapExists,
  OutOfBounds,
  IoError,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyLabel: return "EmptyLabel";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::DuplicateSlideId: return "DuplicateSlideId";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DeckCollision: return "DeckCollision";
    case ErrorCode::UnknownSlide: return "UnknownSlide";
    case ErrorCode::UnknownTopic: return "UnknownTopic";
    case ErrorCode::UnknownDeck: return "UnknownDeck";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::SessionNotLive: return "SessionNotLive";
    case ErrorCode::SessionEnded: return "SessionEnded";
    case ErrorCode::UnknownMap: return "UnknownMap";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::UnknownParticipant: return "UnknownParticipant";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::MapExists: return "MapExists";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(code_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return code_name(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace lecmap
