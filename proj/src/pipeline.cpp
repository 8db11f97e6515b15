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

#include "datavoid/pipeline.hpp"

#include <fstream>

#include "datavoid/error.hpp"

namespace datavoid {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::optional<fs::path> optional_path(const json& j, const char* key,
                                      const fs::path& base) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) throw validation_error(std::string(key) + ": expected a path");
  return resolve(base, j[key].get<std::string>());
}

fs::path required_path(const json& j, const char* key, const fs::path& base) {
  auto p = optional_path(j, key, base);
  if (!p) throw validation_error(std::string(key) + ": required");
  return *p;
}

json path_or_null(const std::optional<fs::path>& p) {
  return p ? json(p->string()) : json(nullptr);
}

void require_file(const fs::path& p, const char* field) {
  if (!fs::is_regular_file(p)) {
    throw validation_error(std::string(field) + ": file not found: " + p.string());
  }
}

}  // namespace

void JobConfig::validate() const {
  require_file(posts, "posts");
  require_file(sources, "sources");
  if (!fs::is_directory(kb_dir)) {
    throw validation_error("kb_dir: directory not found: " + kb_dir.string());
  }
  require_file(topics, "topics");
  if (out_dir.empty()) throw validation_error("out_dir: required");
  if (bot_labels) require_file(*bot_labels, "bot_labels");
  if (page_websites) require_file(*page_websites, "page_websites");
  if (topic_model) require_file(*topic_model, "topic_model");
  if (bot_model) require_file(*bot_model, "bot_model");
  if (!bot_labels && !bot_model) {
    throw validation_error("bot_labels: required when no bot_model is given");
  }
  if (k == 0) throw validation_error("k: must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw validation_error("epsilon: out of range");
  if (!(bot_threshold >= 0.0 && bot_threshold <= 1.0)) {
    throw validation_error("bot_threshold: out of range");
  }
  if (!(thresholds.alpha >= 0.0)) throw validation_error("alpha: must be >= 0");
  if (!(thresholds.tau >= 0.0 && thresholds.tau <= 100.0)) {
    throw validation_error("tau: out of range");
  }
  if (!(thresholds.tau_c >= 0.0 && thresholds.tau_c <= 100.0)) {
    throw validation_error("tau_c: out of range");
  }
}

JobConfig job_config_from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw validation_error("job config: expected an object");
  JobConfig c;
  try {
    c.posts = required_path(j, "posts", base);
    c.sources = required_path(j, "sources", base);
    c.kb_dir = required_path(j, "kb_dir", base);
    c.topics = required_path(j, "topics", base);
    c.out_dir = required_path(j, "out_dir", base);
    c.bot_labels = optional_path(j, "bot_labels", base);
    c.page_websites = optional_path(j, "page_websites", base);
    c.overrides = optional_path(j, "overrides", base);
    c.topic_model = optional_path(j, "topic_model", base);
    c.bot_model = optional_path(j, "bot_model", base);
    if (j.contains("thresholds")) {
      const auto& t = j["thresholds"];
      c.thresholds.alpha = t.value("alpha", c.thresholds.alpha);
      c.thresholds.tau = t.value("tau", c.thresholds.tau);
      c.thresholds.tau_c = t.value("tau_c", c.thresholds.tau_c);
    }
    c.topic_seed = j.value("topic_seed", c.topic_seed);
    c.bot_seed = j.value("bot_seed", c.bot_seed);
    c.k = j.value("k", c.k);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.bot_threshold = j.value("bot_threshold", c.bot_threshold);
    c.strict = j.value("strict", c.strict);
  } catch (const json::exception& e) {
    throw validation_error(std::string("job config: ") + e.what());
  }
  return c;
}

json to_json(const JobConfig& c) {
  return {{"posts", c.posts.string()},
          {"sources", c.sources.string()},
          {"kb_dir", c.kb_dir.string()},
          {"topics", c.topics.string()},
          {"out_dir", c.out_dir.string()},
          {"bot_labels", path_or_null(c.bot_labels)},
          {"page_websites", path_or_null(c.page_websites)},
          {"overrides", path_or_null(c.overrides)},
          {"topic_model", path_or_null(c.topic_model)},
          {"bot_model", path_or_null(c.bot_model)},
          {"thresholds",
           {{"alpha", c.thresholds.alpha},
            {"tau", c.thresholds.tau},
            {"tau_c", c.thresholds.tau_c}}},
          {"topic_seed", c.topic_seed},
          {"bot_seed", c.bot_seed},
          {"k", c.k},
          {"epsilon", c.epsilon},
          {"bot_threshold", c.bot_threshold},
          {"strict", c.strict}};
}

JobConfig job_config_for_corpus_dir(const fs::path& dir, const fs::path& topics,
                                    const fs::path& out_dir) {
  JobConfig c;
  c.posts = dir / "posts.jsonl";
  c.sources = dir / "sources.jsonl";
  c.kb_dir = dir / "kb";
  c.topics = topics;
  if (topics.is_relative() && !fs::exists(topics) && fs::exists(dir / topics)) {
    c.topics = dir / topics;
  }
  c.out_dir = out_dir;
  if (fs::exists(dir / "bot_labels.jsonl")) c.bot_labels = dir / "bot_labels.jsonl";
  if (fs::exists(dir / "page_websites.csv")) {
    c.page_websites = dir / "page_websites.csv";
  } else if (fs::exists(c.kb_dir / "page_websites.csv")) {
    c.page_websites = c.kb_dir / "page_websites.csv";
  }
  c.overrides = c.out_dir / "overrides.jsonl";
  return c;
}

SummaryMeta make_summary_meta(const Corpus& corpus, const TopicConfig& config) {
  return {format_timestamp(std::chrono::time_point_cast<std::chrono::milliseconds>(
              std::chrono::system_clock::now())),
          corpus_hash(corpus), config.hash()};
}

Pipeline::Pipeline(JobConfig config) : config_(std::move(config)) {}
Pipeline::~Pipeline() = default;

void Pipeline::write_json(const std::string& name, const json& j) const {
  fs::create_directories(config_.out_dir);
  std::ofstream out(config_.out_dir / name, std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw fatal_error("cannot write " + (config_.out_dir / name).string());
}

void Pipeline::set_corpus(ParseResult parsed) {
  parsed_ = std::move(parsed);
  corpus_.reset();
  categories_.reset();
  annotated_.reset();
  summary_.reset();
}

void Pipeline::set_topic_config(std::shared_ptr<const TopicConfig> config) {
  topic_config_ = std::move(config);
  annotated_.reset();
  summary_.reset();
}

void Pipeline::set_topic_model(std::shared_ptr<const TopicModel> model) {
  topic_model_ = std::move(model);
}

void Pipeline::set_bot_model(std::shared_ptr<const BotModel> model) {
  bot_model_ = std::move(model);
}

void Pipeline::set_knowledge_base(std::shared_ptr<const KnowledgeBase> kb) {
  kb_ = std::move(kb);
}

void Pipeline::set_override_store(std::shared_ptr<OverrideStore> overrides) {
  overrides_ = std::move(overrides);
}

IngestReport Pipeline::ingest() {
  if (!parsed_) {
    parsed_ = parse_corpus_files(config_.posts, config_.sources);
  }
  const ParseResult& p = *parsed_;
  corpus_ = std::make_shared<const Corpus>(p.corpus);

  fs::create_directories(config_.out_dir);
  {
    std::ofstream out(config_.out_dir / "rejects.jsonl", std::ios::trunc);
    write_rejects_jsonl(p.post_rejects, out);
  }
  {
    std::ofstream out(config_.out_dir / "source_rejects.jsonl", std::ios::trunc);
    write_rejects_jsonl(p.source_rejects, out);
  }
  json stats = to_json(corpus_stats(*corpus_));
  stats["rejected_posts"] = p.post_rejects.size();
  stats["rejected_sources"] = p.source_rejects.size();
  stats["warnings"] = p.warnings;
  write_json("corpus_stats.json", stats);

  IngestReport r{corpus_->posts().size(), p.post_rejects.size(), p.source_rejects.size(),
                 p.warnings.size()};
  if (config_.strict && (r.post_rejects > 0 || r.source_rejects > 0)) {
    throw validation_error("strict: " + std::to_string(r.post_rejects + r.source_rejects) +
                           " input lines rejected");
  }
  return r;
}

const Corpus& Pipeline::corpus() {
  if (!corpus_) ingest();
  return *corpus_;
}

std::shared_ptr<const KnowledgeBase> Pipeline::shared_knowledge_base() {
  if (!kb_) kb_ = std::make_shared<const KnowledgeBase>(load_knowledge_base(config_.kb_dir));
  return kb_;
}

const KnowledgeBase& Pipeline::knowledge_base() { return *shared_knowledge_base(); }

const TopicConfig& Pipeline::topic_config() {
  if (!topic_config_) {
    topic_config_ = std::make_shared<const TopicConfig>(TopicConfig::load(config_.topics));
  }
  return *topic_config_;
}

std::shared_ptr<OverrideStore> Pipeline::override_store() {
  if (!overrides_) {
    overrides_ = config_.overrides ? std::make_shared<OverrideStore>(*config_.overrides)
                                   : std::make_shared<OverrideStore>();
  }
  return overrides_;
}

void Pipeline::categorize() {
  categories_ = categorize_sources(corpus(), knowledge_base(), override_store()->snapshot());
  fs::create_directories(config_.out_dir);
  std::ofstream out(config_.out_dir / "source_categories.jsonl", std::ios::trunc);
  for (const auto& [id, c] : *categories_) {
    json j = to_json(c);
    j["source_id"] = id;
    out << j.dump() << '\n';
  }
  if (!out) throw fatal_error("cannot write source_categories.jsonl");
}

void Pipeline::train() {
  const Corpus& c = corpus();
  const TopicConfig& tc = topic_config();

  if (!topic_model_ && config_.topic_model) {
    topic_model_ = std::make_shared<const TopicModel>(load_topic_model(*config_.topic_model));
  }
  if (!topic_model_ || topic_model_->config_hash != tc.hash()) {
    LabeledSet labeled = weak_label(c, tc, config_.topic_seed);
    write_json("labeled_set.json", to_json(labeled));
    topic_model_ = std::make_shared<const TopicModel>(
        train_topic_model(labeled, c, config_.topic_seed));
  }
  save_topic_model(*topic_model_, config_.out_dir / "topic_model.json");

  if (!bot_model_ && config_.bot_model) {
    bot_model_ = std::make_shared<const BotModel>(load_bot_model(*config_.bot_model));
  }
  if (!bot_model_) {
    if (!config_.bot_labels) {
      throw validation_error("bot_labels: required when no bot_model is given");
    }
    const BurstIndex burst(c);
    std::vector<LabeledFeatures> labeled;
    for (const auto& [post_id, is_bot] : load_bot_labels(*config_.bot_labels)) {
      const Post* p = c.find_post(post_id);
      if (!p) continue;
      labeled.push_back({extract_bot_features(*p, burst.in_burst(post_id)), is_bot});
    }
    auto result = train_bot_model(labeled, config_.bot_seed);
    write_json("bot_metrics.json",
               {{"holdout_confusion", to_json(result.holdout_confusion)},
                {"holdout_metrics", to_json(result.holdout_metrics)},
                {"train_size", result.train_size},
                {"holdout_size", result.holdout_size}});
    bot_model_ = std::make_shared<const BotModel>(std::move(result.model));
  }
  save_bot_model(*bot_model_, config_.out_dir / "bot_model.json");
}

std::shared_ptr<const TopicModel> Pipeline::topic_model() {
  if (!topic_model_ || !bot_model_) train();
  return topic_model_;
}

std::shared_ptr<const BotModel> Pipeline::bot_model() {
  if (!topic_model_ || !bot_model_) train();
  return bot_model_;
}

void Pipeline::annotate() {
  const Corpus& c = corpus();
  const KnowledgeBase& kb = knowledge_base();
  const TopicConfig& tc = topic_config();
  if (!categories_) categorize();
  auto tm = topic_model();
  auto bm = bot_model();

  PageWebsiteMap pages;
  if (config_.page_websites) pages = PageWebsiteMap::load(*config_.page_websites, kb);
  const LexiconSentimentScorer scorer(kb);
  const BurstIndex burst(c);
  const auto topics = classify_topics(*tm, c, tc);

  std::vector<AnnotatedPost> out;
  out.reserve(c.posts().size());
  for (std::size_t i = 0; i < c.posts().size(); ++i) {
    const Post& p = c.posts()[i];
    const Source* src = c.find_source(p.source_id);
    AnnotatedPost a;
    a.post = p;
    a.source_name = src->name;
    a.topic = topics[i];
    a.leaning_score = leaning_score(p, *src, kb, pages, scorer);
    a.leaning = leaning_label(a.leaning_score, config_.epsilon);
    a.bot = classify_bot(*bm, p, burst.in_burst(p.post_id), config_.bot_threshold);
    a.source_category = categories_->at(p.source_id);
    out.push_back(std::move(a));
  }
  annotated_ = std::move(out);
  summary_.reset();

  fs::create_directories(config_.out_dir);
  std::ofstream f(config_.out_dir / "annotated_corpus.jsonl", std::ios::trunc);
  write_annotated_jsonl(*annotated_, f);
  if (!f) throw fatal_error("cannot write annotated_corpus.jsonl");
}

const std::vector<AnnotatedPost>& Pipeline::annotated() {
  if (!annotated_) annotate();
  return *annotated_;
}

void Pipeline::report() {
  const auto& posts = annotated();
  summary_ = summarize(posts, topic_config().names(), config_.k,
                       make_summary_meta(corpus(), topic_config()));
  voids_ = detect_voids(*summary_, config_.thresholds);
  write_json("summary.json", to_json(*summary_));
  write_json("void_report.json", to_json(*voids_));
}

std::shared_ptr<const AnalysisSnapshot> Pipeline::run() {
  ingest();
  categorize();
  train();
  annotate();
  report();
  auto s = std::make_shared<AnalysisSnapshot>();
  s->corpus = corpus_;
  s->topics = topic_config().names();
  s->config_hash = topic_config().hash();
  s->corpus_hash = summary_->meta.corpus_hash;
  s->categories = *categories_;
  s->annotated = *annotated_;
  s->summary = *summary_;
  s->thresholds = config_.thresholds;
  s->voids = *voids_;
  return s;
}

}  // namespace datavoid
