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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/bot.hpp"
#include "datavoid/corpus.hpp"
#include "datavoid/leaning.hpp"
#include "datavoid/source_categorizer.hpp"
#include "datavoid/topic_engine.hpp"

namespace datavoid {

struct AnnotatedPost {
  Post post;
  std::string source_name;
  TopicAssignment topic;
  LeaningScore leaning_score;
  LeaningLabel leaning;
  BotVerdict bot;
  SourceCategory source_category;
};

nlohmann::json to_json(const AnnotatedPost& p);
AnnotatedPost annotated_post_from_json(const nlohmann::json& j);
void write_annotated_jsonl(std::span<const AnnotatedPost> posts, std::ostream& out);
std::vector<AnnotatedPost> read_annotated_jsonl(std::istream& in);

struct LeaningCounts {
  std::size_t liberal = 0;
  std::size_t conservative = 0;
  std::size_t neutral = 0;
  std::size_t total() const { return liberal + conservative + neutral; }
  bool operator==(const LeaningCounts&) const = default;
};

struct LeaningPercent {
  double liberal = 0.0;
  double conservative = 0.0;
  double neutral = 0.0;
  bool operator==(const LeaningPercent&) const = default;
};

struct EngagementTotals {
  std::int64_t comments = 0;
  std::int64_t shares = 0;
  std::int64_t likes = 0;
  bool operator==(const EngagementTotals&) const = default;
};

struct EngagementShare {
  double comments = 0.0;
  double shares = 0.0;
  bool operator==(const EngagementShare&) const = default;
};

struct SourceTypeCounts {
  std::size_t news_media = 0;
  std::size_t political = 0;
  std::size_t citizen = 0;
  std::size_t get(Category c) const;
  bool operator==(const SourceTypeCounts&) const = default;
};

struct FrequentSource {
  std::string source_id;
  std::string name;
  Category category = Category::citizen;
  std::size_t count = 0;
  bool operator==(const FrequentSource&) const = default;
};

struct TopEngagement {
  std::string post_id;
  std::int64_t engagement = 0;  // comments + shares
  bool operator==(const TopEngagement&) const = default;
};

struct SummaryMeta {
  std::string generated_at;
  std::string corpus_hash;
  std::string config_hash;
  bool operator==(const SummaryMeta&) const = default;
};

// The aggregate views behind every dashboard chart. Topics with no posts
// still appear in posts_per_topic (count 0) but have no leaning
// distribution.
struct DashboardSummary {
  std::vector<std::string> topics;  // config order
  std::size_t total_posts = 0;
  std::size_t k = 10;
  std::map<std::string, std::size_t> posts_per_topic;
  std::map<std::string, LeaningCounts> leaning_counts;
  std::map<std::string, LeaningPercent> leaning_distribution;
  std::map<std::string, EngagementTotals> engagement_totals;
  std::map<std::string, EngagementShare> engagement_share;
  std::map<std::string, SourceTypeCounts> posts_per_source_type;
  std::map<std::string, std::size_t> bot_counts;
  std::map<std::string, double> bot_share;
  std::map<std::string, std::vector<FrequentSource>> frequent_sources;
  std::map<std::string, TopEngagement> max_post_engagement;
  SummaryMeta meta;

  bool operator==(const DashboardSummary&) const = default;
};

// Single pass. Posts whose topic is not in `topics` are rejected
// (validation error). Percentages come from exact integer counts.
DashboardSummary summarize(std::span<const AnnotatedPost> posts,
                           const std::vector<std::string>& topics,
                           std::size_t k = 10, SummaryMeta meta = {});

nlohmann::json to_json(const DashboardSummary& s);
DashboardSummary summary_from_json(const nlohmann::json& j);

// Posts of `topic` (optionally one leaning), ordered by comments + shares
// descending; ties keep input order. Throws not_found for unknown topics.
std::vector<AnnotatedPost> deep_dive(std::span<const AnnotatedPost> posts,
                                     const std::vector<std::string>& topics,
                                     const std::string& topic,
                                     std::optional<Leaning> leaning = std::nullopt);

struct VoidThresholds {
  double alpha = 0.25;  // topic void below alpha * median topic count
  double tau = 10.0;    // leaning void below tau percent
  double tau_c = 10.0;  // source-type void below tau_c percent
  bool operator==(const VoidThresholds&) const = default;
};

enum class VoidLevel { topic, leaning, source_type, combined };
std::string_view to_string(VoidLevel l) noexcept;

struct VoidFinding {
  VoidLevel level = VoidLevel::topic;
  std::string topic;
  std::optional<Leaning> leaning;
  std::optional<Category> source_type;
  double deficit = 0.0;   // normalized to [0, 1]
  double severity = 0.0;  // deficit * topic engagement weight
  // Raw evidence: "topic_count", "median", "leaning_count",
  // "source_type_count", "percent", "threshold", ...
  std::map<std::string, double> evidence;
  bool operator==(const VoidFinding&) const = default;
};

struct VoidReport {
  VoidThresholds thresholds;
  double median_topic_count = 0.0;
  std::vector<VoidFinding> findings;  // severity descending
  bool operator==(const VoidReport&) const = default;
};

// Pure function of (summary, thresholds).
//   topic:       posts_per_topic[t] < alpha * median(posts_per_topic)
//   leaning:     leaning_distribution[t][l] < tau
//   source_type: share of topic t's posts from category c < tau_c
//   combined:    every (leaning, source_type) pair flagged for one topic
// Severity = deficit * topic engagement weight, where the weight is the mean
// of the topic's comment and share percentages divided by 100.
VoidReport detect_voids(const DashboardSummary& summary,
                        const VoidThresholds& thresholds = {});

nlohmann::json to_json(const VoidReport& r);

}  // namespace datavoid
