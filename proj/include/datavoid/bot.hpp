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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/corpus.hpp"
#include "datavoid/metrics.hpp"

namespace datavoid {

inline constexpr std::size_t kBotHashedTokenDims = 256;
inline constexpr std::size_t kBotStyleDims = 6;
inline constexpr std::size_t kBotFeatureDim = kBotHashedTokenDims + kBotStyleDims;
inline constexpr std::string_view kBotFeatureVersion = "bot-features-v1";

// Raw stylometric measurements of one post.
struct BotStylometrics {
  std::size_t url_count = 0;      // tokens starting http://, https://, www.
  std::size_t hashtag_count = 0;  // tokens starting '#'
  std::size_t mention_count = 0;  // tokens starting '@'
  double mean_token_length = 0.0;  // in code points, over word tokens
  double repetition_ratio = 0.0;   // 1 - distinct/total word tokens; 0 if none
  double burst = 0.0;              // 1 when the source posted in a burst
};

// kBotFeatureDim values: L2-normalized hashed unigram counts (sublinear),
// then scaled stylometrics.
struct BotFeatures {
  std::vector<double> values;
  BotStylometrics style;
};

// Per-post burst indicator: a post is in a burst when its source published
// at least `min_neighbours` other posts within +-`window` of it.
class BurstIndex {
 public:
  BurstIndex() = default;
  explicit BurstIndex(const Corpus& corpus,
                      std::chrono::seconds window = std::chrono::seconds(60),
                      std::size_t min_neighbours = 2);

  std::optional<bool> in_burst(std::string_view post_id) const;

 private:
  std::map<std::string, bool, std::less<>> bursts_;
};

BotFeatures extract_bot_features(const Post& post,
                                 std::optional<bool> burst = std::nullopt);

struct LabeledFeatures {
  BotFeatures features;
  bool is_bot = false;
};

struct BotTrainOptions {
  std::size_t hidden = 32;
  std::size_t epochs = 40;
  double learning_rate = 0.05;
  double l2 = 1e-4;
  std::size_t min_per_class = 20;
  double holdout_fraction = 0.2;
};

struct BotTrainingMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  double l2 = 0.0;
  std::string dataset_hash;
  std::string feature_version;
};

// One hidden tanh layer, sigmoid output.
struct BotModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x input_dim, row-major
  std::vector<double> b1;
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
  BotTrainingMeta meta;

  // In [0, 1]. Throws fatal on a dimension mismatch and validation on
  // non-finite input.
  double probability(std::span<const double> x) const;
};

struct BotTrainResult {
  BotModel model;
  ConfusionMatrix holdout_confusion;  // positive class = bot
  Metrics holdout_metrics;
  std::size_t train_size = 0;
  std::size_t holdout_size = 0;
};

// Deterministic given `seed`; stratified 80/20 split. Throws fatal
// "insufficient class support" below min_per_class examples per class.
BotTrainResult train_bot_model(std::span<const LabeledFeatures> labeled,
                               std::uint64_t seed,
                               const BotTrainOptions& options = {});

inline constexpr double kDefaultBotThreshold = 0.5;

struct BotVerdict {
  std::string post_id;
  double probability = 0.0;
  bool is_bot = false;
};

// is_bot iff probability >= threshold.
BotVerdict make_verdict(std::string post_id, double probability,
                        double threshold = kDefaultBotThreshold);

BotVerdict classify_bot(const BotModel& model, const Post& post,
                        std::optional<bool> burst = std::nullopt,
                        double threshold = kDefaultBotThreshold);
BotVerdict classify_bot(const BotModel& model, const BotFeatures& features,
                        std::string post_id,
                        double threshold = kDefaultBotThreshold);

// Mean bot probability per source over the given verdicts.
std::map<std::string, double> source_bot_probability(
    const Corpus& corpus, std::span<const BotVerdict> verdicts);

// bot_labels.jsonl: {"post_id", "is_bot"} per line. Labels for posts absent
// from the corpus are skipped; malformed lines throw fatal.
std::vector<std::pair<std::string, bool>> load_bot_labels(
    const std::filesystem::path& path);

nlohmann::json to_json(const BotModel& model);
BotModel bot_model_from_json(const nlohmann::json& j);
void save_bot_model(const BotModel& model, const std::filesystem::path& path);
BotModel load_bot_model(const std::filesystem::path& path);

}  // namespace datavoid
