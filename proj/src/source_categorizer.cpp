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

#include "datavoid/source_categorizer.hpp"

#include <fstream>

#include "datavoid/error.hpp"

namespace datavoid {

using nlohmann::json;

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::news_media:
      return "news_media";
    case Category::political:
      return "political";
    case Category::citizen:
      return "citizen";
  }
  return "citizen";
}

std::optional<Category> parse_category(std::string_view s) noexcept {
  if (s == "news_media") return Category::news_media;
  if (s == "political") return Category::political;
  if (s == "citizen") return Category::citizen;
  return std::nullopt;
}

std::string_view to_string(CategoryOrigin o) noexcept {
  return o == CategoryOrigin::override ? "override" : "automatic";
}

json to_json(const SourceCategory& c) {
  json j = {{"category", std::string(to_string(c.category))},
            {"origin", std::string(to_string(c.origin))}};
  j["matched_evidence"] =
      c.matched_evidence ? json(*c.matched_evidence) : json(nullptr);
  return j;
}

SourceCategory categorize_source(const Source& source, const KnowledgeBase& kb) {
  const auto name_tokens = text::tokenize(source.name);
  const auto canonical = text::canonicalize_name(source.name);

  if (kb.data().news_site_names.contains(canonical)) {
    return {Category::news_media, CategoryOrigin::automatic,
            "news_sites:" + canonical};
  }
  if (auto hits = kb.news_site_matcher().find_all(name_tokens); !hits.empty()) {
    return {Category::news_media, CategoryOrigin::automatic,
            "news_sites:" + kb.news_site_list()[hits.front()]};
  }

  if (auto hits = kb.political_term_matcher().find_all(name_tokens);
      !hits.empty()) {
    return {Category::political, CategoryOrigin::automatic,
            "political_terms:" + kb.political_term_list()[hits.front()]};
  }
  const auto desc_tokens = text::tokenize(source.description);
  if (auto hits = kb.political_term_matcher().find_all(desc_tokens);
      !hits.empty()) {
    return {Category::political, CategoryOrigin::automatic,
            "political_terms:" + kb.political_term_list()[hits.front()]};
  }
  if (auto hits = kb.party_actor_matcher().find_all(name_tokens); !hits.empty()) {
    return {Category::political, CategoryOrigin::automatic,
            "parties_actors:" + kb.party_actor_list()[hits.front()]};
  }
  return {Category::citizen, CategoryOrigin::automatic, std::nullopt};
}

OverrideStore::OverrideStore(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("source_id") ||
        !j["source_id"].is_string() || !j.contains("category") ||
        !j["category"].is_string()) {
      throw fatal_error(path_->filename().string() + ": malformed override line " +
                        std::to_string(n));
    }
    auto cat = parse_category(j["category"].get<std::string>());
    if (!cat) {
      throw fatal_error(path_->filename().string() +
                        ": unknown category line " + std::to_string(n));
    }
    std::string ts = j.value("ts", std::string());
    records_[j["source_id"].get<std::string>()] = {*cat, std::move(ts)};
  }
}

SourceCategory OverrideStore::apply(const Corpus& corpus,
                                    const std::string& source_id,
                                    Category category) {
  return apply(corpus, source_id, category,
               std::chrono::time_point_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now()));
}

SourceCategory OverrideStore::apply(const Corpus& corpus,
                                    const std::string& source_id,
                                    Category category, Timestamp ts) {
  if (corpus.find_source(source_id) == nullptr) {
    throw not_found_error("unknown source: " + source_id);
  }
  OverrideRecord rec{category, format_timestamp(ts)};
  std::lock_guard lock(mu_);
  if (path_) {
    std::error_code ec;
    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path(), ec);
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    if (!out) throw fatal_error("cannot write " + path_->string());
    out << json{{"source_id", source_id},
                {"category", std::string(to_string(category))},
                {"ts", rec.ts}}
               .dump()
        << '\n';
    out.flush();
    if (!out) throw fatal_error("cannot write " + path_->string());
  }
  records_[source_id] = rec;
  return {category, CategoryOrigin::override, std::nullopt};
}

std::optional<OverrideRecord> OverrideStore::find(
    const std::string& source_id) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(source_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, OverrideRecord> OverrideStore::snapshot() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::map<std::string, SourceCategory> categorize_sources(
    const Corpus& corpus, const KnowledgeBase& kb,
    const std::map<std::string, OverrideRecord>& overrides) {
  std::map<std::string, SourceCategory> out;
  for (const Source& s : corpus.sources()) {
    auto it = overrides.find(s.source_id);
    if (it != overrides.end()) {
      out[s.source_id] = {it->second.category, CategoryOrigin::override,
                          std::nullopt};
    } else {
      out[s.source_id] = categorize_source(s, kb);
    }
  }
  return out;
}

}  // namespace datavoid
