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

#include "lecmap/deck.hpp"
#include "lecmap/storage.hpp"

namespace lecmap::testing {

inline std::string fixture_path(const std::string& name) { return std::string(LECMAP_FIXTURE_DIR) + "/" + name; }

inline std::string algo101_text() { return storage::read_file(fixture_path("algo101.json")); }

inline TopicMap algo101_map() { return build_map(parse_deck(algo101_text())); }

inline SlideRef algo(const std::string& slide) { return {"algo101", slide}; }

inline SubjectIdentifier id(const std::string& value) { return SubjectIdentifier::unchecked(value); }

}  // namespace lecmap::testing
