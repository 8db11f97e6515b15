// Copyright 2026 The Datavoid Authors
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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Text utilities shared by every engine: UTF-8 word segmentation, name
// canonicalization, word-boundary phrase matching and stable hashing.
namespace datavoid::text {

// Splits UTF-8 text into lower-cased word tokens. A word is a maximal run of
// letters and digits; punctuation, symbols, emoji and whitespace separate
// words. Invalid byte sequences act as separators.
std::vector<std::string> tokenize(std::string_view utf8);

// Lower-cases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
std::string to_lower(std::string_view utf8);

// Lower-case, strip punctuation, collapse whitespace:
// "The  New-York Times!" -> "the new york times".
std::string canonicalize_name(std::string_view utf8);

// Whitespace-separated pieces of `s` (ASCII whitespace only).
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// True if `phrase` occurs as a contiguous run inside `tokens`.
bool contains_phrase(std::span<const std::string> tokens,
                     std::span<const std::string> phrase);

// Indexes a set of phrases by their first token so that a tokenized text can
// be scanned once for every phrase it contains on word boundaries.
class PhraseMatcher {
 public:
  // Returns the phrase id. Phrases that tokenize to nothing are ignored and
  // return SIZE_MAX.
  std::size_t add(std::string_view phrase);

  // Distinct ids of the phrases found in `tokens`, ordered by first
  // occurrence.
  std::vector<std::size_t> find_all(std::span<const std::string> tokens) const;

  const std::vector<std::string>& phrase_tokens(std::size_t id) const {
    return phrases_[id];
  }
  std::size_t size() const noexcept { return phrases_.size(); }

 private:
  std::vector<std::vector<std::string>> phrases_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = kFnvOffset) noexcept;

// 16 lower-case hex digits.
std::string hex64(std::uint64_t value);

}  // namespace datavoid::text
