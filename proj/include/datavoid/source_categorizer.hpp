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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "datavoid/corpus.hpp"
#include "datavoid/knowledge_base.hpp"

namespace datavoid {

enum class Category { news_media, political, citizen };
enum class CategoryOrigin { automatic, override };

std::string_view to_string(Category c) noexcept;
std::optional<Category> parse_category(std::string_view s) noexcept;
std::string_view to_string(CategoryOrigin o) noexcept;

struct SourceCategory {
  Category category = Category::citizen;
  CategoryOrigin origin = CategoryOrigin::automatic;
  std::optional<std::string> matched_evidence;

  bool operator==(const SourceCategory&) const = default;
};

nlohmann::json to_json(const SourceCategory& c);

// Rule cascade, first match wins:
//   1. canonical name equals or contains a news-site name  -> news_media
//   2. name/description mention a political term, or the name mentions a
//      party or political actor                               -> political
//   3. otherwise                                              -> citizen
// Evidence is "<list>:<matched entry>", e.g. "news_sites:the new york times".
SourceCategory categorize_source(const Source& source, const KnowledgeBase& kb);

struct OverrideRecord {
  Category category = Category::citizen;
  std::string ts;  // RFC 3339
};

// Journalist corrections, persisted as an append-only overrides.jsonl
// sidecar. Later lines win. Writes are serialized; readers get copies.
class OverrideStore {
 public:
  OverrideStore() = default;
  // Loads existing records from `path` (if present) and appends new ones to
  // it.
  explicit OverrideStore(std::filesystem::path path);

  OverrideStore(const OverrideStore&) = delete;
  OverrideStore& operator=(const OverrideStore&) = delete;

  // Throws not_found when `source_id` is not in `corpus`.
  SourceCategory apply(const Corpus& corpus, const std::string& source_id,
                       Category category);
  SourceCategory apply(const Corpus& corpus, const std::string& source_id,
                       Category category, Timestamp ts);

  std::optional<OverrideRecord> find(const std::string& source_id) const;
  std::map<std::string, OverrideRecord> snapshot() const;

 private:
  mutable std::mutex mu_;
  std::optional<std::filesystem::path> path_;
  std::map<std::string, OverrideRecord> records_;
};

// Automatic categorization of every source, with overrides applied on top.
std::map<std::string, SourceCategory> categorize_sources(
    const Corpus& corpus, const KnowledgeBase& kb,
    const std::map<std::string, OverrideRecord>& overrides = {});

}  // namespace datavoid
