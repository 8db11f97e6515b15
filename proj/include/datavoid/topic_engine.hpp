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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/corpus.hpp"
#include "datavoid/encoder.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

struct Topic {
  std::string name;
  std::vector<std::string> keywords;
};

// Journalist-supplied topics and keywords. At least two topics, unique
// names, non-empty keyword lists; keywords are matched as whole phrases.
class TopicConfig {
 public:
  explicit TopicConfig(std::vector<Topic> topics);

  // {"topics":[{"name":..., "keywords":[...]}]}
  static TopicConfig from_json(const nlohmann::json& j);
  static TopicConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<Topic>& topics() const noexcept { return topics_; }
  std::size_t size() const noexcept { return topics_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;
  // Stable digest of names and keywords, embedded in trained models.
  const std::string& hash() const noexcept { return hash_; }

  // Number of distinct keywords of each topic present in `tokens`.
  std::vector<std::size_t> keyword_hits(
      std::span<const std::string> tokens) const;

 private:
  std::vector<Topic> topics_;
  std::string hash_;
  text::PhraseMatcher matcher_;
  std::vector<std::size_t> keyword_topic_;  // phrase id -> topic index
};

// Topic with the most distinct keyword hits; ties go to the earlier topic.
// Empty when no keyword matches.
std::optional<std::size_t> weak_label_topic(const TopicConfig& config,
                                            std::string_view text);

struct LabeledItem {
  std::string post_id;
  std::string topic;
  bool operator==(const LabeledItem&) const = default;
};

struct BalanceEntry {
  std::string topic;
  std::size_t available = 0;  // posts weak-labeled with this topic
  std::size_t sampled = 0;
  std::size_t deficit = 0;  // target - sampled
  bool operator==(const BalanceEntry&) const = default;
};

struct LabeledSet {
  std::vector<LabeledItem> items;  // corpus order
  std::map<std::string, std::size_t> counts;
  std::vector<BalanceEntry> balance_report;  // config order
  std::size_t target = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> topics;
  std::string config_hash;
};

// Weak-labels every post that mentions at least one keyword, then samples
// each topic down to the smallest non-zero topic count. Topics below the
// target are reported in balance_report, never padded with duplicates.
LabeledSet weak_label(const Corpus& corpus, const TopicConfig& config,
                      std::uint64_t seed);

nlohmann::json to_json(const LabeledSet& set);

struct TopicTrainOptions {
  std::size_t epochs = 30;
  double learning_rate = 0.1;
  // Per-epoch learning rate is learning_rate / (1 + lr_decay * epoch).
  double lr_decay = 0.05;
  double l2 = 1e-4;
  std::size_t min_support = 10;
  double validation_fraction = 0.2;
  // Null means fit a BagOfTokensEncoder on the training split.
  std::shared_ptr<const TextEncoder> encoder;
};

struct TopicTrainingMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  double lr_decay = 0.0;
  double l2 = 0.0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

// Softmax-linear multiclass model over an encoder's features.
struct TopicModel {
  std::vector<std::string> topics;
  std::string config_hash;
  std::shared_ptr<const TextEncoder> encoder;
  std::vector<double> weights;  // topics x dimension, row-major
  std::vector<double> bias;     // per topic
  TopicTrainingMeta meta;
  double validation_accuracy = 0.0;

  // Class distribution for `text`; sums to 1.
  std::vector<double> probabilities(std::string_view text) const;
  std::vector<double> probabilities(const SparseVector& x) const;
};

// Deterministic given `seed`: stratified 80/20 split, then SGD on
// cross-entropy. Throws fatal "insufficient support: <topics>" when a topic
// that appears in `labeled` has fewer than min_support items.
TopicModel train_topic_model(const LabeledSet& labeled, const Corpus& corpus,
                             std::uint64_t seed,
                             const TopicTrainOptions& options = {});

nlohmann::json to_json(const TopicModel& model);
TopicModel topic_model_from_json(const nlohmann::json& j);
void save_topic_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);

enum class TopicMethod { weak_label, model };
std::string_view to_string(TopicMethod m) noexcept;

struct TopicAssignment {
  std::string post_id;
  std::string topic;
  double confidence = 0.0;
  TopicMethod method = TopicMethod::model;
  std::vector<double> probabilities;  // config order
};

// One assignment per post, in corpus order. Throws fatal when the model was
// trained against a different topic config.
std::vector<TopicAssignment> classify_topics(const TopicModel& model,
                                             const Corpus& corpus,
                                             const TopicConfig& config);

}  // namespace datavoid
