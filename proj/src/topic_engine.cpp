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

#include "datavoid/topic_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include "datavoid/error.hpp"
#include "datavoid/rng.hpp"

namespace datavoid {

using nlohmann::json;

namespace {
constexpr int kModelFormatVersion = 1;
}

TopicConfig::TopicConfig(std::vector<Topic> topics) : topics_(std::move(topics)) {
  if (topics_.size() < 2) {
    throw validation_error("topic config needs at least 2 topics");
  }
  std::set<std::string> names;
  for (auto& topic : topics_) {
    if (topic.name.empty()) throw validation_error("topic with empty name");
    if (!names.insert(topic.name).second) {
      throw validation_error("duplicate topic name: " + topic.name);
    }
    // Keywords that canonicalize identically are counted once.
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (auto& kw : topic.keywords) {
      const auto canon = text::canonicalize_name(kw);
      if (canon.empty()) {
        throw validation_error("topic " + topic.name +
                               " has a keyword without words: '" + kw + "'");
      }
      if (seen.insert(canon).second) unique.push_back(kw);
    }
    if (unique.empty()) {
      throw validation_error("topic " + topic.name + " has no keywords");
    }
    topic.keywords = std::move(unique);
  }
  for (std::size_t t = 0; t < topics_.size(); ++t) {
    for (const auto& kw : topics_[t].keywords) {
      matcher_.add(kw);
      keyword_topic_.push_back(t);
    }
  }
  hash_ = text::hex64(text::fnv1a64(to_json().dump()));
}

TopicConfig TopicConfig::from_json(const json& j) {
  if (!j.is_object() || !j.contains("topics") || !j["topics"].is_array()) {
    throw validation_error("topics config: missing 'topics' array");
  }
  std::vector<Topic> topics;
  for (const auto& t : j["topics"]) {
    if (!t.is_object() || !t.contains("name") || !t["name"].is_string()) {
      throw validation_error("topics config: topic without 'name'");
    }
    Topic topic;
    topic.name = t["name"].get<std::string>();
    if (!t.contains("keywords") || !t["keywords"].is_array()) {
      throw validation_error("topics config: topic " + topic.name +
                             " without 'keywords'");
    }
    for (const auto& kw : t["keywords"]) {
      if (!kw.is_string()) {
        throw validation_error("topics config: non-string keyword in " +
                               topic.name);
      }
      topic.keywords.push_back(kw.get<std::string>());
    }
    topics.push_back(std::move(topic));
  }
  return TopicConfig(std::move(topics));
}

TopicConfig TopicConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("cannot open topics file " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw validation_error("topics file is not valid JSON: " + path.string());
  }
  return from_json(j);
}

json TopicConfig::to_json() const {
  json arr = json::array();
  for (const auto& t : topics_) {
    arr.push_back({{"name", t.name}, {"keywords", t.keywords}});
  }
  return {{"topics", arr}};
}

std::optional<std::size_t> TopicConfig::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < topics_.size(); ++i) {
    if (topics_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> TopicConfig::names() const {
  std::vector<std::string> out;
  for (const auto& t : topics_) out.push_back(t.name);
  return out;
}

std::vector<std::size_t> TopicConfig::keyword_hits(
    std::span<const std::string> tokens) const {
  std::vector<std::size_t> hits(topics_.size(), 0);
  for (std::size_t id : matcher_.find_all(tokens)) ++hits[keyword_topic_[id]];
  return hits;
}

std::optional<std::size_t> weak_label_topic(const TopicConfig& config,
                                            std::string_view input) {
  const auto tokens = text::tokenize(input);
  const auto hits = config.keyword_hits(tokens);
  std::size_t best = 0;
  for (std::size_t t = 1; t < hits.size(); ++t) {
    if (hits[t] > hits[best]) best = t;
  }
  if (hits[best] == 0) return std::nullopt;
  return best;
}

LabeledSet weak_label(const Corpus& corpus, const TopicConfig& config,
                      std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_topic(config.size());
  const auto& posts = corpus.posts();
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (auto t = weak_label_topic(config, posts[i].text)) {
      by_topic[*t].push_back(i);
    }
  }

  std::size_t target = std::numeric_limits<std::size_t>::max();
  for (const auto& v : by_topic) {
    if (!v.empty()) target = std::min(target, v.size());
  }
  if (target == std::numeric_limits<std::size_t>::max()) target = 0;

  LabeledSet set;
  set.seed = seed;
  set.target = target;
  set.topics = config.names();
  set.config_hash = config.hash();

  Rng rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> chosen;  // post, topic
  for (std::size_t t = 0; t < config.size(); ++t) {
    auto candidates = by_topic[t];
    rng.shuffle(candidates);
    const std::size_t take = std::min(target, candidates.size());
    for (std::size_t k = 0; k < take; ++k) chosen.emplace_back(candidates[k], t);
    const auto& name = config.topics()[t].name;
    set.counts[name] = take;
    set.balance_report.push_back(
        {name, by_topic[t].size(), take, target - take});
  }
  std::sort(chosen.begin(), chosen.end());
  for (const auto& [post, topic] : chosen) {
    set.items.push_back({posts[post].post_id, config.topics()[topic].name});
  }
  return set;
}

json to_json(const LabeledSet& set) {
  json items = json::array();
  for (const auto& it : set.items) {
    items.push_back({{"post_id", it.post_id}, {"topic", it.topic}});
  }
  json balance = json::array();
  for (const auto& b : set.balance_report) {
    balance.push_back({{"topic", b.topic},
                       {"available", b.available},
                       {"sampled", b.sampled},
                       {"deficit", b.deficit}});
  }
  return {{"items", items},          {"counts", set.counts},
          {"balance_report", balance}, {"target", set.target},
          {"seed", set.seed},          {"config_hash", set.config_hash}};
}

namespace {

double dot_row(const std::vector<double>& weights, std::size_t row,
               std::size_t dim, const SparseVector& x) {
  double s = 0.0;
  const double* w = weights.data() + row * dim;
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    s += w[x.indices[k]] * x.values[k];
  }
  return s;
}

void softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(
      std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

}  // namespace

std::vector<double> TopicModel::probabilities(const SparseVector& x) const {
  const std::size_t dim = encoder ? encoder->dimension() : 0;
  std::vector<double> z(topics.size());
  for (std::size_t c = 0; c < topics.size(); ++c) {
    z[c] = bias[c] + dot_row(weights, c, dim, x);
  }
  softmax_inplace(z);
  return z;
}

std::vector<double> TopicModel::probabilities(std::string_view input) const {
  return probabilities(encoder->encode(input));
}

TopicModel train_topic_model(const LabeledSet& labeled, const Corpus& corpus,
                             std::uint64_t seed,
                             const TopicTrainOptions& options) {
  const std::size_t num_topics = labeled.topics.size();
  if (num_topics < 2) throw validation_error("labeled set has fewer than 2 topics");

  std::unordered_map<std::string, std::size_t> topic_index;
  for (std::size_t t = 0; t < num_topics; ++t) topic_index[labeled.topics[t]] = t;

  std::vector<std::vector<std::size_t>> per_topic(num_topics);  // item indices
  for (std::size_t i = 0; i < labeled.items.size(); ++i) {
    auto it = topic_index.find(labeled.items[i].topic);
    if (it == topic_index.end()) {
      throw validation_error("labeled item with unknown topic " +
                             labeled.items[i].topic);
    }
    if (corpus.find_post(labeled.items[i].post_id) == nullptr) {
      throw validation_error("labeled item references unknown post " +
                             labeled.items[i].post_id);
    }
    per_topic[it->second].push_back(i);
  }

  std::string insufficient;
  for (std::size_t t = 0; t < num_topics; ++t) {
    const auto n = per_topic[t].size();
    if (n > 0 && n < options.min_support) {
      if (!insufficient.empty()) insufficient += ", ";
      insufficient += labeled.topics[t];
    }
  }
  if (!insufficient.empty()) {
    throw fatal_error("insufficient support: " + insufficient);
  }
  if (labeled.items.empty()) throw fatal_error("insufficient support: no labeled posts");

  Rng rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> train, validation;  // item, topic
  for (std::size_t t = 0; t < num_topics; ++t) {
    auto idx = per_topic[t];
    rng.shuffle(idx);
    const auto n_val = static_cast<std::size_t>(
        std::floor(static_cast<double>(idx.size()) * options.validation_fraction + 0.5));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_val ? validation : train).emplace_back(idx[k], t);
    }
  }

  auto text_of = [&](std::size_t item) -> const std::string& {
    return corpus.find_post(labeled.items[item].post_id)->text;
  };

  std::shared_ptr<const TextEncoder> encoder = options.encoder;
  if (!encoder) {
    std::vector<std::string> texts;
    texts.reserve(train.size());
    for (const auto& [item, t] : train) texts.push_back(text_of(item));
    encoder = BagOfTokensEncoder::fit(texts);
  }
  const std::size_t dim = encoder->dimension();

  std::vector<SparseVector> train_x;
  train_x.reserve(train.size());
  for (const auto& [item, t] : train) train_x.push_back(encoder->encode(text_of(item)));

  TopicModel model;
  model.topics = labeled.topics;
  model.config_hash = labeled.config_hash;
  model.encoder = encoder;
  model.weights.assign(num_topics * dim, 0.0);
  model.bias.assign(num_topics, 0.0);
  model.meta = {seed,        options.epochs,  options.learning_rate,
                options.lr_decay, options.l2, train.size(),
                validation.size()};

  std::vector<std::size_t> order(train.size());
  std::vector<double> z(num_topics);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const double lr = options.learning_rate /
                      (1.0 + options.lr_decay * static_cast<double>(epoch));
    for (std::size_t i : order) {
      const SparseVector& x = train_x[i];
      const std::size_t y = train[i].second;
      for (std::size_t c = 0; c < num_topics; ++c) {
        z[c] = model.bias[c] + dot_row(model.weights, c, dim, x);
      }
      softmax_inplace(z);
      for (std::size_t c = 0; c < num_topics; ++c) {
        const double g = z[c] - (c == y ? 1.0 : 0.0);
        model.bias[c] -= lr * g;
        double* w = model.weights.data() + c * dim;
        for (std::size_t k = 0; k < x.indices.size(); ++k) {
          double& wk = w[x.indices[k]];
          wk -= lr * (g * x.values[k] + options.l2 * wk);
        }
      }
    }
  }

  std::size_t correct = 0;
  for (const auto& [item, t] : validation) {
    if (argmax(model.probabilities(text_of(item))) == t) ++correct;
  }
  model.validation_accuracy =
      validation.empty() ? 0.0
                         : static_cast<double>(correct) /
                               static_cast<double>(validation.size());
  return model;
}

json to_json(const TopicModel& model) {
  return {{"format", "datavoid.topic_model"},
          {"version", kModelFormatVersion},
          {"topics", model.topics},
          {"config_hash", model.config_hash},
          {"encoder", model.encoder->to_json()},
          {"weights", model.weights},
          {"bias", model.bias},
          {"validation_accuracy", model.validation_accuracy},
          {"meta",
           {{"seed", model.meta.seed},
            {"epochs", model.meta.epochs},
            {"learning_rate", model.meta.learning_rate},
            {"lr_decay", model.meta.lr_decay},
            {"l2", model.meta.l2},
            {"train_size", model.meta.train_size},
            {"validation_size", model.meta.validation_size}}}};
}

TopicModel topic_model_from_json(const json& j) {
  if (j.value("format", std::string()) != "datavoid.topic_model" ||
      j.value("version", 0) != kModelFormatVersion) {
    throw validation_error("not a datavoid topic model (format/version)");
  }
  TopicModel m;
  m.topics = j.at("topics").get<std::vector<std::string>>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.encoder = encoder_from_json(j.at("encoder"));
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<std::vector<double>>();
  m.validation_accuracy = j.at("validation_accuracy").get<double>();
  const auto& meta = j.at("meta");
  m.meta = {meta.at("seed").get<std::uint64_t>(),
            meta.at("epochs").get<std::size_t>(),
            meta.at("learning_rate").get<double>(),
            meta.at("lr_decay").get<double>(),
            meta.at("l2").get<double>(),
            meta.at("train_size").get<std::size_t>(),
            meta.at("validation_size").get<std::size_t>()};
  if (m.bias.size() != m.topics.size() ||
      m.weights.size() != m.topics.size() * m.encoder->dimension()) {
    throw validation_error("topic model weight shape does not match its encoder");
  }
  return m;
}

void save_topic_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fatal_error("cannot write " + path.string());
  out << to_json(model).dump() << '\n';
}

TopicModel load_topic_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("cannot open topic model " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw validation_error("topic model is not valid JSON");
  return topic_model_from_json(j);
}

std::string_view to_string(TopicMethod m) noexcept {
  return m == TopicMethod::weak_label ? "weak_label" : "model";
}

std::vector<TopicAssignment> classify_topics(const TopicModel& model,
                                             const Corpus& corpus,
                                             const TopicConfig& config) {
  if (model.config_hash != config.hash() || model.topics != config.names()) {
    throw fatal_error("vocabulary mismatch: model was trained on topic config " +
                      model.config_hash + ", current config is " + config.hash());
  }
  std::vector<TopicAssignment> out;
  out.reserve(corpus.posts().size());
  for (const Post& p : corpus.posts()) {
    auto probs = model.probabilities(p.text);
    const std::size_t best = argmax(probs);
    out.push_back({p.post_id, model.topics[best], probs[best], TopicMethod::model,
                   std::move(probs)});
  }
  return out;
}

}  // namespace datavoid
