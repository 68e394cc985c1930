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

#include <compare>
#include <string>
#include <string_view>
#include <utility>

#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lecmap/error.hpp"

namespace lecmap {

// A normalized keyword. Topics from different maps unify exactly when their
// identifiers are byte-equal.
class SubjectIdentifier {
 public:
  SubjectIdentifier() = default;

  // Wraps an already-normalized string without checking it. Used by the
  // deserializer; validate() reports identifiers that are not normal.
  static SubjectIdentifier unchecked(std::string value) {
    SubjectIdentifier id;
    id.value_ = std::move(value);
    return id;
  }

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const SubjectIdentifier&, const SubjectIdentifier&) = default;
  friend std::strong_ordering operator<=>(const SubjectIdentifier& a, const SubjectIdentifier& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

namespace detail {

// Case-folds, trims and collapses whitespace runs to a single '-'.
inline std::string fold_and_collapse(std::string_view raw) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text.foldCase(U_FOLD_CASE_DEFAULT);

  icu::UnicodeString out;
  bool pending_separator = false;
  for (int32_t i = 0; i < text.length();) {
    UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_separator = !out.isEmpty();
      continue;
    }
    if (pending_separator) {
      out.append(static_cast<UChar>(u'-'));
      pending_separator = false;
    }
    out.append(c);
  }

  std::string result;
  out.toUTF8String(result);
  return result;
}

}  // namespace detail

inline SubjectIdentifier normalize_label(std::string_view raw) {
  std::string value = detail::fold_and_collapse(raw);
  if (value.empty()) {
    throw Error(ErrorCode::EmptyLabel, "label '" + std::string(raw) + "' is empty after normalization");
  }
  return SubjectIdentifier::unchecked(std::move(value));
}

inline bool is_normalized(std::string_view value) {
  return !value.empty() && detail::fold_and_collapse(value) == value;
}

}  // namespace lecmap
