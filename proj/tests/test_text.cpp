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

#include <doctest.h>

#include <string>
#include <vector>

#include "datavoid/text.hpp"

using namespace datavoid::text;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize lower-cases and splits on punctuation") {
  CHECK(tokenize("Hello, World! It's 2021.") == Tokens{"hello", "world", "it", "s", "2021"});
  CHECK(tokenize("") == Tokens{});
  CHECK(tokenize("   \t\n") == Tokens{});
}

TEST_CASE("tokenize handles non-ASCII letters") {
  CHECK(tokenize("Noticias en Español") == Tokens{"noticias", "en", "español"});
  CHECK(tokenize("ÉLECTION Ünïcode") == Tokens{"élection", "ünïcode"});
  CHECK(tokenize("Привет Мир") == Tokens{"привет", "мир"});
}

TEST_CASE("tokenize treats emoji and invalid bytes as separators") {
  CHECK(tokenize("good\xF0\x9F\x98\x80news") == Tokens{"good", "news"});
  CHECK(tokenize(std::string("ab\xFF" "cd")) == Tokens{"ab", "cd"});
}

TEST_CASE("canonicalize_name strips punctuation and collapses whitespace") {
  CHECK(canonicalize_name("The  New-York Times!") == "the new york times");
  CHECK(canonicalize_name("  Fox   News ") == "fox news");
  CHECK(canonicalize_name("") == "");
}

TEST_CASE("contains_phrase matches contiguous runs only") {
  const Tokens tokens{"i", "met", "joe", "biden", "today"};
  CHECK(contains_phrase(tokens, Tokens{"joe", "biden"}));
  CHECK_FALSE(contains_phrase(tokens, Tokens{"joe", "today"}));
  CHECK_FALSE(contains_phrase(tokens, Tokens{}));
}

TEST_CASE("PhraseMatcher finds distinct phrases in order of first occurrence") {
  PhraseMatcher m;
  const auto biden = m.add("Joe Biden");
  const auto border = m.add("border");
  const auto wall = m.add("border wall");
  CHECK(m.add("!!!") == SIZE_MAX);
  const auto found = m.find_all(tokenize("The border wall, said Joe Biden, and the border"));
  CHECK(found == std::vector<std::size_t>{border, wall, biden});
  CHECK(m.find_all(tokenize("Bidenomics")).empty());
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == kFnvOffset);
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(0).size() == 16);
}
