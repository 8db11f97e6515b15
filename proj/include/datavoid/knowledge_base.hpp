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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "datavoid/text.hpp"

namespace datavoid {

// Leaning scores use one convention everywhere: negative = liberal,
// positive = conservative, both bounded by [-1, +1].
struct KnowledgeBaseData {
  std::map<std::string, double> website_scores;  // lower-case domain
  // Optional display names from the third websites.csv column, keyed by
  // canonical name.
  std::map<std::string, std::string> website_display_names;
  std::map<std::string, double> actor_scores;  // canonical name
  std::set<std::string> news_site_names;       // canonical
  std::set<std::string> political_terms;       // canonical
  std::set<std::string> party_and_actor_names;  // canonical
  std::map<std::string, double> sentiment_lexicon;  // lower-case token
};

struct KnowledgeBaseCounts {
  std::size_t websites = 0;
  std::size_t actors = 0;
  std::size_t news_sites = 0;
  std::size_t parties_actors = 0;
  std::size_t lexicon = 0;
  std::size_t political_terms = 0;
};

// Immutable, indexed view over KnowledgeBaseData. Safe to share read-only
// between threads.
class KnowledgeBase {
 public:
  KnowledgeBase() : KnowledgeBase(KnowledgeBaseData{}) {}
  // Canonicalizes names and validates every score is in [-1, +1].
  explicit KnowledgeBase(KnowledgeBaseData data);

  const KnowledgeBaseData& data() const noexcept { return data_; }
  KnowledgeBaseCounts counts() const;

  // Phrase indexes; ids map to the vectors below.
  const text::PhraseMatcher& actor_matcher() const { return actor_matcher_; }
  const std::vector<std::string>& actor_names() const { return actor_names_; }
  const text::PhraseMatcher& political_term_matcher() const {
    return term_matcher_;
  }
  const std::vector<std::string>& political_term_list() const {
    return term_list_;
  }
  const text::PhraseMatcher& party_actor_matcher() const {
    return party_matcher_;
  }
  const std::vector<std::string>& party_actor_list() const {
    return party_list_;
  }
  const text::PhraseMatcher& news_site_matcher() const { return news_matcher_; }
  const std::vector<std::string>& news_site_list() const { return news_list_; }

  // Domains whose registered or derived display name equals the canonical
  // source name. Derived names are the domain's leading label ("foxnews"
  // for foxnews.com), compared with spaces removed too.
  std::vector<std::string> domains_for_display_name(
      std::string_view canonical_name) const;

 private:
  KnowledgeBaseData data_;
  text::PhraseMatcher actor_matcher_;
  std::vector<std::string> actor_names_;
  text::PhraseMatcher term_matcher_;
  std::vector<std::string> term_list_;
  text::PhraseMatcher party_matcher_;
  std::vector<std::string> party_list_;
  text::PhraseMatcher news_matcher_;
  std::vector<std::string> news_list_;
  std::unordered_map<std::string, std::vector<std::string>> display_index_;
};

// Shipped synonym set used when political_synonyms.txt is absent.
const std::set<std::string>& default_political_terms();

// Reads websites.csv, actors.csv, news_sites.txt, parties_actors.txt,
// sentiment_lexicon.csv and the optional political_synonyms.txt. Missing
// required files and out-of-range scores throw fatal errors naming the
// file (and line).
KnowledgeBase load_knowledge_base(const std::filesystem::path& dir);

struct WebsiteMention {
  std::string domain;
  double score = 0.0;
  bool operator==(const WebsiteMention&) const = default;
};

struct ActorMention {
  std::string name;
  double score = 0.0;
  bool operator==(const ActorMention&) const = default;
};

struct EntityMentions {
  std::vector<WebsiteMention> websites;
  std::vector<ActorMention> actors;

  bool empty() const { return websites.empty() && actors.empty(); }
  bool operator==(const EntityMentions&) const = default;
};

enum class ActorMatching { whole_phrase, substring };

struct MatchOptions {
  ActorMatching actors = ActorMatching::whole_phrase;
};

// Distinct websites and actors mentioned in `text`, in order of first
// appearance. Website matches come from URLs and bare domain tokens;
// a listed domain matches a host equal to it or ending in "." + domain.
EntityMentions match_entities(std::string_view text, const KnowledgeBase& kb,
                              const MatchOptions& options = {});

}  // namespace datavoid
