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

// Shared test helpers: scratch directories, builders, synthetic corpora and
// independent oracles the library results are checked against.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "datavoid/bot.hpp"
#include "datavoid/corpus.hpp"
#include "datavoid/knowledge_base.hpp"
#include "datavoid/leaning.hpp"
#include "datavoid/topic_engine.hpp"
#include "datavoid/void_analyzer.hpp"

namespace dvtest {

namespace fs = std::filesystem;

inline const fs::path kFixturesDir = DATAVOID_FIXTURES_DIR;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const fs::path& p) const { return path_ / p; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

// 2021-09-01T00:00:00Z plus `seconds`.
datavoid::Timestamp ts(std::int64_t seconds);

datavoid::Post make_post(std::string id, std::string source_id, std::string text,
                         std::int64_t at_seconds = 0, std::int64_t likes = 0,
                         std::int64_t comments = 0, std::int64_t shares = 0);
datavoid::Source make_source(std::string id, std::string name,
                             std::string description = {},
                             datavoid::SourceKind kind = datavoid::SourceKind::page);

datavoid::AnnotatedPost make_annotated(std::string id, std::string topic,
                                       datavoid::Leaning leaning,
                                       datavoid::Category category = datavoid::Category::citizen,
                                       bool is_bot = false, std::int64_t comments = 0,
                                       std::int64_t shares = 0,
                                       std::string source_id = "s1");

// Small knowledge base used across modules.
datavoid::KnowledgeBaseData sample_kb_data();

// ---------------------------------------------------------------------------
// Leaning oracle

// What the generator put into one post, independent of any text parsing.
struct LeaningRecipe {
  std::vector<std::string> websites;  // distinct domains mentioned
  std::vector<std::string> actors;    // distinct actors mentioned
  std::vector<double> sentiment;      // weight of every lexicon token written
};

struct LeaningFixture {
  datavoid::KnowledgeBaseData kb;
  // Explicit page -> domain rows (what page_websites.csv would hold).
  std::vector<std::pair<std::string, std::string>> explicit_pages;
  // Ground truth: source id -> represented domains, including display-name
  // links the generator arranged.
  std::map<std::string, std::vector<std::string>> source_domains;
  std::vector<datavoid::Source> sources;
  std::vector<datavoid::Post> posts;
  std::vector<LeaningRecipe> recipes;  // parallel to posts
};

LeaningFixture make_leaning_fixture(std::size_t n, std::uint64_t seed);

struct OracleLeaning {
  datavoid::LeaningRule rule = datavoid::LeaningRule::neutral_default;
  double final_score = 0.0;
};

// The cascade written out directly over the recipe tables.
OracleLeaning leaning_oracle(const LeaningFixture& fx, std::size_t post_index);

// ---------------------------------------------------------------------------
// Topic oracles and corpora

// Independent keyword recount over ASCII text: distinct keyword hits per
// topic, first topic wins ties, empty without hits.
std::optional<std::string> recount_topic(const std::string& text,
                                         const std::vector<datavoid::Topic>& topics);

struct TopicCorpus {
  std::vector<datavoid::Topic> topics;
  datavoid::Corpus corpus;
  std::vector<std::string> truth;  // generating topic, parallel to posts
};

// Every topic owns disjoint keywords and vocabulary; posts carry one or two
// of their topic's keywords plus topic words and shared filler.
TopicCorpus make_separable_topic_corpus(std::size_t topic_count,
                                        std::size_t posts_per_topic,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bot corpora

// Bots: promotional text, links, hashtags, mentions, bursts. Humans: plain
// conversational text, no bursts.
std::vector<datavoid::LabeledFeatures> make_separable_bot_set(std::size_t per_class,
                                                              std::uint64_t seed);
datavoid::Post bot_like_post(std::uint64_t seed);
datavoid::Post human_like_post(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Annotated corpora for aggregation

std::vector<std::string> topic_names(std::size_t n);

std::vector<datavoid::AnnotatedPost> random_annotated(std::size_t n,
                                                      const std::vector<std::string>& topics,
                                                      std::uint64_t seed);

struct PlantedVoids {
  std::vector<std::string> topics;
  std::vector<datavoid::AnnotatedPost> posts;
  std::string thin_topic;          // count below alpha * median
  std::string no_conservative;     // zero conservative posts
};

PlantedVoids make_planted_voids(std::uint64_t seed);

// Fixture used by the aggregation and service examples: topics {A,A,B,B},
// leanings {liberal, conservative, neutral, neutral}.
std::vector<datavoid::AnnotatedPost> four_post_fixture();

}  // namespace dvtest
