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

#include <string>
#include <string_view>

#include "datavoid/corpus.hpp"

namespace datavoid {

struct Translation {
  std::string text;
  std::string target_language;
  std::string provider;
  bool translated = false;
};

// Pluggable machine translation.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual Translation translate(std::string_view text,
                                std::string_view target_language) const = 0;
};

// Returns the input unchanged and says so.
class IdentityTranslator final : public Translator {
 public:
  Translation translate(std::string_view text,
                        std::string_view target_language) const override {
    return {std::string(text), std::string(target_language), "identity", false};
  }
};

struct FetchRequest {
  std::string list_id;
  TimeWindow window;
};

// Live post collection from a social-media analytics API. Only file-based
// ingest is implemented; a real client implements this interface.
class PostSourceClient {
 public:
  virtual ~PostSourceClient() = default;
  virtual ParseResult fetch(const FetchRequest& request) = 0;
};

// Always throws fatal: live API access is not part of this build.
class CrowdTangleClientStub final : public PostSourceClient {
 public:
  ParseResult fetch(const FetchRequest& request) override;
};

}  // namespace datavoid
