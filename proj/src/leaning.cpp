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

#include "datavoid/leaning.hpp"

#include <algorithm>
#include <fstream>

#include "datavoid/error.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

SentimentScore sentiment_score(std::string_view input,
                               const std::map<std::string, double>& lexicon) {
  SentimentScore out;
  if (lexicon.empty()) return out;
  double sum = 0.0;
  for (const auto& tok : text::tokenize(input)) {
    auto it = lexicon.find(tok);
    if (it == lexicon.end()) continue;
    sum += it->second;
    ++out.matched_token_count;
  }
  if (out.matched_token_count > 0) {
    out.s = std::clamp(sum / static_cast<double>(out.matched_token_count), -1.0,
                       1.0);
  }
  return out;
}

PageWebsiteMap PageWebsiteMap::load(const std::filesystem::path& path,
                                    const KnowledgeBase& kb) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("missing knowledge file: " + path.filename().string());
  PageWebsiteMap map;
  std::string line;
  std::size_t n = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.rfind(',');
    if (comma == std::string_view::npos) {
      throw fatal_error("page_websites.csv: expected 'source_name,domain' line " +
                        std::to_string(n));
    }
    std::string domain(text::trim(t.substr(comma + 1)));
    for (char& c : domain) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    const bool was_first = first;
    first = false;
    if (was_first && domain == "domain") continue;  // header
    if (!kb.data().website_scores.contains(domain)) {
      throw fatal_error("page_websites.csv: unlisted domain '" + domain +
                        "' line " + std::to_string(n));
    }
    map.add(t.substr(0, comma), domain);
  }
  return map;
}

void PageWebsiteMap::add(std::string_view source_name, std::string_view domain) {
  auto& v = explicit_[text::canonicalize_name(source_name)];
  std::string d(domain);
  if (std::find(v.begin(), v.end(), d) == v.end()) v.push_back(std::move(d));
}

std::vector<std::string> PageWebsiteMap::domains_for(
    std::string_view source_name, const KnowledgeBase& kb) const {
  const auto canon = text::canonicalize_name(source_name);
  std::vector<std::string> out = kb.domains_for_display_name(canon);
  if (auto it = explicit_.find(canon); it != explicit_.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(LeaningRule r) noexcept {
  switch (r) {
    case LeaningRule::page_website:
      return "page_website";
    case LeaningRule::mentions:
      return "mentions";
    case LeaningRule::neutral_default:
      return "neutral_default";
  }
  return "neutral_default";
}

LeaningScore leaning_score(const Post& post, const Source& source,
                           const KnowledgeBase& kb, const PageWebsiteMap& pages,
                           const SentimentScorer& scorer) {
  LeaningScore out;
  const auto domains = pages.domains_for(source.name, kb);
  if (!domains.empty()) {
    double sum = 0.0;
    for (const auto& d : domains) sum += kb.data().website_scores.at(d);
    out.b_w = sum / static_cast<double>(domains.size());
    out.final_score = *out.b_w;
    out.rule_used = LeaningRule::page_website;
    return out;
  }

  const auto mentions = match_entities(post.text, kb);
  if (!mentions.empty()) {
    double sum = 0.0;
    for (const auto& w : mentions.websites) sum += w.score;
    for (const auto& a : mentions.actors) sum += a.score;
    out.b_a = sum / static_cast<double>(mentions.websites.size() +
                                        mentions.actors.size());
    out.s = scorer.score(post.text).s;
    out.final_score = *out.b_a * *out.s;
    out.rule_used = LeaningRule::mentions;
    return out;
  }

  out.final_score = 0.0;
  out.rule_used = LeaningRule::neutral_default;
  return out;
}

std::string_view to_string(Leaning l) noexcept {
  switch (l) {
    case Leaning::liberal:
      return "liberal";
    case Leaning::conservative:
      return "conservative";
    case Leaning::neutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<Leaning> parse_leaning(std::string_view s) noexcept {
  if (s == "liberal") return Leaning::liberal;
  if (s == "conservative") return Leaning::conservative;
  if (s == "neutral") return Leaning::neutral;
  return std::nullopt;
}

LeaningLabel leaning_label(const LeaningScore& score, double epsilon) {
  if (!(epsilon >= 0.0)) throw validation_error("epsilon must be >= 0");
  LeaningLabel out;
  out.epsilon = epsilon;
  if (score.final_score < -epsilon) {
    out.label = Leaning::liberal;
  } else if (score.final_score > epsilon) {
    out.label = Leaning::conservative;
  } else {
    out.label = Leaning::neutral;
  }
  return out;
}

nlohmann::json to_json(const LeaningScore& score) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"b_w", opt(score.b_w)},
          {"b_a", opt(score.b_a)},
          {"s", opt(score.s)},
          {"final", score.final_score},
          {"rule", std::string(to_string(score.rule_used))}};
}

}  // namespace datavoid
