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

#include "lecmap/crowd.hpp"
#include "lecmap/deck.hpp"
#include "lecmap/error.hpp"
#include "lecmap/graph_ops.hpp"
#include "lecmap/identifier.hpp"
#include "lecmap/model.hpp"
#include "lecmap/query.hpp"
#include "lecmap/serialize.hpp"
#include "lecmap/session.hpp"
#include "lecmap/validate.hpp"
