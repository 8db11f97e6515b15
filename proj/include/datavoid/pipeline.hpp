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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/bot.hpp"
#include "datavoid/corpus.hpp"
#include "datavoid/knowledge_base.hpp"
#include "datavoid/leaning.hpp"
#include "datavoid/source_categorizer.hpp"
#include "datavoid/topic_engine.hpp"
#include "datavoid/void_analyzer.hpp"

namespace datavoid {

// Everything one end-to-end run needs. Relative paths in JSON are resolved
// against the file's directory.
struct JobConfig {
  std::filesystem::path posts;
  std::filesystem::path sources;
  std::filesystem::path kb_dir;
  std::filesystem::path topics;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> bot_labels;
  std::optional<std::filesystem::path> page_websites;
  std::optional<std::filesystem::path> overrides;
  // Pretrained models; when absent the train stage fits new ones.
  std::optional<std::filesystem::path> topic_model;
  std::optional<std::filesystem::path> bot_model;

  VoidThresholds thresholds;
  std::uint64_t topic_seed = 42;
  std::uint64_t bot_seed = 42;
  std::size_t k = 10;
  double epsilon = kDefaultNeutralEpsilon;
  double bot_threshold = kDefaultBotThreshold;
  // Any rejected input line fails the ingest stage.
  bool strict = false;

  // Throws validation naming the first unresolvable path or bad value.
  void validate() const;
};

JobConfig job_config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const JobConfig& c);

// Conventional layout of a corpus directory: posts.jsonl, sources.jsonl,
// kb/, and optionally bot_labels.jsonl, page_websites.csv (here or in kb/)
// and overrides.jsonl. A relative `topics` path that does not exist is
// looked up inside the corpus directory.
JobConfig job_config_for_corpus_dir(const std::filesystem::path& corpus_dir,
                                    const std::filesystem::path& topics,
                                    const std::filesystem::path& out_dir);

// Immutable result of a full run; the service swaps whole snapshots.
struct AnalysisSnapshot {
  std::shared_ptr<const Corpus> corpus;
  std::vector<std::string> topics;
  std::string config_hash;
  std::string corpus_hash;
  std::map<std::string, SourceCategory> categories;
  std::vector<AnnotatedPost> annotated;
  DashboardSummary summary;
  VoidThresholds thresholds;
  VoidReport voids;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t post_rejects = 0;
  std::size_t source_rejects = 0;
  std::size_t warnings = 0;
};

// Stages run lazily: each one first runs whatever it depends on that has
// not run yet. Every stage writes its artifacts into out_dir.
class Pipeline {
 public:
  explicit Pipeline(JobConfig config);
  ~Pipeline();

  const JobConfig& config() const noexcept { return config_; }

  // posts/sources -> corpus_stats.json, rejects.jsonl, source_rejects.jsonl
  IngestReport ingest();
  // -> source_categories.jsonl
  void categorize();
  // -> labeled_set.json, topic_model.json, bot_model.json, bot_metrics.json
  void train();
  // -> annotated_corpus.jsonl
  void annotate();
  // -> summary.json, void_report.json
  void report();

  // Inject inputs instead of reading them from the configured paths.
  void set_corpus(ParseResult parsed);
  void set_topic_config(std::shared_ptr<const TopicConfig> config);
  void set_topic_model(std::shared_ptr<const TopicModel> model);
  void set_bot_model(std::shared_ptr<const BotModel> model);
  void set_knowledge_base(std::shared_ptr<const KnowledgeBase> kb);
  void set_override_store(std::shared_ptr<OverrideStore> overrides);

  const Corpus& corpus();
  const KnowledgeBase& knowledge_base();
  const TopicConfig& topic_config();
  std::shared_ptr<const TopicModel> topic_model();
  std::shared_ptr<const BotModel> bot_model();
  std::shared_ptr<const KnowledgeBase> shared_knowledge_base();
  std::shared_ptr<OverrideStore> override_store();
  const std::vector<AnnotatedPost>& annotated();

  // Runs every stage and packages the result.
  std::shared_ptr<const AnalysisSnapshot> run();

 private:
  void write_json(const std::string& name, const nlohmann::json& j) const;

  JobConfig config_;
  std::optional<ParseResult> parsed_;
  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const KnowledgeBase> kb_;
  std::shared_ptr<const TopicConfig> topic_config_;
  std::shared_ptr<const TopicModel> topic_model_;
  std::shared_ptr<const BotModel> bot_model_;
  std::shared_ptr<OverrideStore> overrides_;
  std::optional<std::map<std::string, SourceCategory>> categories_;
  std::optional<std::vector<AnnotatedPost>> annotated_;
  std::optional<DashboardSummary> summary_;
  std::optional<VoidReport> voids_;
};

// Summary metadata for the current wall-clock time.
SummaryMeta make_summary_meta(const Corpus& corpus, const TopicConfig& config);

}  // namespace datavoid
