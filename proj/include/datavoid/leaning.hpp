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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/corpus.hpp"
#include "datavoid/knowledge_base.hpp"

namespace datavoid {

struct SentimentScore {
  double s = 0.0;  // [-1, +1]
  std::size_t matched_token_count = 0;
};

// text -> s. The default is the lexicon mean; model-based scorers plug in
// here.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual SentimentScore score(std::string_view text) const = 0;
};

// Mean weight over every token occurrence found in the lexicon, clamped to
// [-1, +1]; 0 when nothing matches.
SentimentScore sentiment_score(std::string_view text,
                               const std::map<std::string, double>& lexicon);

class LexiconSentimentScorer final : public SentimentScorer {
 public:
  explicit LexiconSentimentScorer(const KnowledgeBase& kb) : kb_(kb) {}
  SentimentScore score(std::string_view text) const override {
    return sentiment_score(text, kb_.data().sentiment_lexicon);
  }

 private:
  const KnowledgeBase& kb_;
};

// Links pages to the websites they represent: explicit rows from
// page_websites.csv ("source_name,domain") plus automatic matches on the
// knowledge base's website display names.
class PageWebsiteMap {
 public:
  PageWebsiteMap() = default;
  // Throws fatal on a malformed row or a domain missing from websites.csv.
  static PageWebsiteMap load(const std::filesystem::path& path,
                             const KnowledgeBase& kb);

  void add(std::string_view source_name, std::string_view domain);
  // Sorted, de-duplicated domains represented by the named source.
  std::vector<std::string> domains_for(std::string_view source_name,
                                       const KnowledgeBase& kb) const;

 private:
  std::map<std::string, std::vector<std::string>> explicit_;  // canonical name
};

enum class LeaningRule { page_website, mentions, neutral_default };
std::string_view to_string(LeaningRule r) noexcept;

struct LeaningScore {
  std::optional<double> b_w;
  std::optional<double> b_a;
  std::optional<double> s;
  double final_score = 0.0;
  LeaningRule rule_used = LeaningRule::neutral_default;
};

// Rule cascade:
//   1. the post's source represents listed website(s): final = b_w, the mean
//      of their scores;
//   2. else the text mentions listed websites or actors: b_a = mean over all
//      mentioned websites and actors, s = sentiment, final = b_a * s;
//   3. else final = 0.
LeaningScore leaning_score(const Post& post, const Source& source,
                           const KnowledgeBase& kb, const PageWebsiteMap& pages,
                           const SentimentScorer& scorer);

enum class Leaning { liberal, conservative, neutral };
std::string_view to_string(Leaning l) noexcept;
std::optional<Leaning> parse_leaning(std::string_view s) noexcept;

struct LeaningLabel {
  Leaning label = Leaning::neutral;
  double epsilon = 0.1;
};

constexpr double kDefaultNeutralEpsilon = 0.1;

// final < -eps -> liberal; final > eps -> conservative; otherwise neutral.
LeaningLabel leaning_label(const LeaningScore& score,
                           double epsilon = kDefaultNeutralEpsilon);

nlohmann::json to_json(const LeaningScore& score);

}  // namespace datavoid
