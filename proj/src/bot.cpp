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

#include "datavoid/bot.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "datavoid/error.hpp"
#include "datavoid/rng.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

using nlohmann::json;

namespace {

constexpr int kModelFormatVersion = 1;

bool is_url(std::string_view piece) {
  return piece.starts_with("http://") || piece.starts_with("https://") ||
         piece.starts_with("www.");
}

std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

BurstIndex::BurstIndex(const Corpus& corpus, std::chrono::seconds window,
                       std::size_t min_neighbours) {
  std::map<std::string, std::vector<std::pair<Timestamp, const Post*>>> by_source;
  for (const Post& p : corpus.posts()) {
    by_source[p.source_id].emplace_back(p.created_at, &p);
  }
  for (auto& [src, posts] : by_source) {
    std::sort(posts.begin(), posts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < posts.size(); ++i) {
      while (posts[i].first - posts[lo].first > window) ++lo;
      if (hi < i) hi = i;
      while (hi + 1 < posts.size() && posts[hi + 1].first - posts[i].first <= window) {
        ++hi;
      }
      const std::size_t neighbours = hi - lo;  // excludes the post itself
      bursts_[posts[i].second->post_id] = neighbours >= min_neighbours;
    }
  }
}

std::optional<bool> BurstIndex::in_burst(std::string_view post_id) const {
  auto it = bursts_.find(post_id);
  if (it == bursts_.end()) return std::nullopt;
  return it->second;
}

BotFeatures extract_bot_features(const Post& post, std::optional<bool> burst) {
  BotFeatures f;
  f.values.assign(kBotFeatureDim, 0.0);

  std::string words;
  for (auto piece : text::split_whitespace(post.text)) {
    if (is_url(piece)) {
      ++f.style.url_count;
      continue;
    }
    if (piece.starts_with('#')) ++f.style.hashtag_count;
    if (piece.starts_with('@')) ++f.style.mention_count;
    words.append(piece);
    words.push_back(' ');
  }
  const auto tokens = text::tokenize(words);

  if (!tokens.empty()) {
    std::unordered_set<std::string_view> distinct;
    std::size_t length = 0;
    std::vector<double> tf(kBotHashedTokenDims, 0.0);
    for (const auto& tok : tokens) {
      distinct.insert(tok);
      length += code_points(tok);
      tf[text::fnv1a64(tok) % kBotHashedTokenDims] += 1.0;
    }
    const auto n = static_cast<double>(tokens.size());
    f.style.mean_token_length = static_cast<double>(length) / n;
    f.style.repetition_ratio = 1.0 - static_cast<double>(distinct.size()) / n;
    double norm = 0.0;
    for (double& v : tf) {
      if (v > 0.0) v = 1.0 + std::log(v);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < kBotHashedTokenDims; ++i) f.values[i] = tf[i] / norm;
  }
  f.style.burst = burst.value_or(false) ? 1.0 : 0.0;

  double* style = f.values.data() + kBotHashedTokenDims;
  style[0] = std::log1p(static_cast<double>(f.style.url_count));
  style[1] = std::log1p(static_cast<double>(f.style.hashtag_count));
  style[2] = std::log1p(static_cast<double>(f.style.mention_count));
  style[3] = f.style.mean_token_length / 10.0;
  style[4] = f.style.repetition_ratio;
  style[5] = f.style.burst;
  return f;
}

double BotModel::probability(std::span<const double> x) const {
  if (x.size() != input_dim) {
    throw fatal_error("feature dimension mismatch: model expects " +
                      std::to_string(input_dim) + ", got " +
                      std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw validation_error("non-finite bot feature");
  }
  double z = b2;
  for (std::size_t h = 0; h < hidden; ++h) {
    double a = b1[h];
    const double* row = w1.data() + h * input_dim;
    for (std::size_t i = 0; i < input_dim; ++i) a += row[i] * x[i];
    z += w2[h] * std::tanh(a);
  }
  return sigmoid(z);
}

BotTrainResult train_bot_model(std::span<const LabeledFeatures> labeled,
                               std::uint64_t seed,
                               const BotTrainOptions& options) {
  std::vector<std::size_t> bots, humans;
  std::size_t dim = 0;
  std::uint64_t dataset_hash = text::kFnvOffset;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto& v = labeled[i].features.values;
    if (i == 0) dim = v.size();
    if (v.size() != dim || dim == 0) {
      throw validation_error("bot training examples have inconsistent dimensions");
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw validation_error("non-finite bot feature");
    }
    (labeled[i].is_bot ? bots : humans).push_back(i);
    dataset_hash = text::fnv1a64(
        std::string_view(reinterpret_cast<const char*>(v.data()),
                         v.size() * sizeof(double)),
        dataset_hash);
    dataset_hash = text::fnv1a64(labeled[i].is_bot ? "1" : "0", dataset_hash);
  }
  if (bots.size() < options.min_per_class || humans.size() < options.min_per_class) {
    throw fatal_error("insufficient class support: " + std::to_string(bots.size()) +
                      " bot and " + std::to_string(humans.size()) +
                      " human examples (need " +
                      std::to_string(options.min_per_class) + " each)");
  }

  Rng rng(seed);
  std::vector<std::size_t> train, holdout;
  for (auto* cls : {&bots, &humans}) {
    auto idx = *cls;
    rng.shuffle(idx);
    const auto n_hold = static_cast<std::size_t>(
        std::floor(static_cast<double>(idx.size()) * options.holdout_fraction + 0.5));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_hold ? holdout : train).push_back(idx[k]);
    }
  }

  BotModel m;
  m.input_dim = dim;
  m.hidden = options.hidden;
  m.w1.resize(m.hidden * dim);
  m.b1.assign(m.hidden, 0.0);
  m.w2.resize(m.hidden);
  const double a1 = std::sqrt(6.0 / static_cast<double>(dim + m.hidden));
  for (double& w : m.w1) w = rng.uniform(-a1, a1);
  const double a2 = std::sqrt(6.0 / static_cast<double>(m.hidden + 1));
  for (double& w : m.w2) w = rng.uniform(-a2, a2);
  m.meta = {seed, options.epochs, options.learning_rate, options.l2,
            text::hex64(dataset_hash), std::string(kBotFeatureVersion)};

  std::vector<double> act(m.hidden), delta(m.hidden);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(train);
    const double lr = options.learning_rate;
    for (std::size_t idx : train) {
      const auto& x = labeled[idx].features.values;
      const double y = labeled[idx].is_bot ? 1.0 : 0.0;
      double z = m.b2;
      for (std::size_t h = 0; h < m.hidden; ++h) {
        double a = m.b1[h];
        const double* row = m.w1.data() + h * dim;
        for (std::size_t i = 0; i < dim; ++i) a += row[i] * x[i];
        act[h] = std::tanh(a);
        z += m.w2[h] * act[h];
      }
      const double g = sigmoid(z) - y;
      for (std::size_t h = 0; h < m.hidden; ++h) {
        delta[h] = g * m.w2[h] * (1.0 - act[h] * act[h]);
        m.w2[h] -= lr * (g * act[h] + options.l2 * m.w2[h]);
      }
      m.b2 -= lr * g;
      for (std::size_t h = 0; h < m.hidden; ++h) {
        double* row = m.w1.data() + h * dim;
        for (std::size_t i = 0; i < dim; ++i) {
          row[i] -= lr * (delta[h] * x[i] + options.l2 * row[i]);
        }
        m.b1[h] -= lr * delta[h];
      }
    }
  }

  BotTrainResult result;
  result.train_size = train.size();
  result.holdout_size = holdout.size();
  for (std::size_t idx : holdout) {
    const bool predicted =
        m.probability(labeled[idx].features.values) >= kDefaultBotThreshold;
    const bool actual = labeled[idx].is_bot;
    if (predicted && actual) ++result.holdout_confusion.tp;
    if (predicted && !actual) ++result.holdout_confusion.fp;
    if (!predicted && actual) ++result.holdout_confusion.fn;
    if (!predicted && !actual) ++result.holdout_confusion.tn;
  }
  result.holdout_metrics = compute_metrics(result.holdout_confusion);
  result.model = std::move(m);
  return result;
}

BotVerdict make_verdict(std::string post_id, double probability, double threshold) {
  return {std::move(post_id), probability, probability >= threshold};
}

BotVerdict classify_bot(const BotModel& model, const Post& post,
                        std::optional<bool> burst, double threshold) {
  return classify_bot(model, extract_bot_features(post, burst), post.post_id,
                      threshold);
}

BotVerdict classify_bot(const BotModel& model, const BotFeatures& features,
                        std::string post_id, double threshold) {
  return make_verdict(std::move(post_id), model.probability(features.values),
                      threshold);
}

std::map<std::string, double> source_bot_probability(
    const Corpus& corpus, std::span<const BotVerdict> verdicts) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& v : verdicts) {
    const Post* p = corpus.find_post(v.post_id);
    if (p == nullptr) continue;
    auto& [sum, n] = acc[p->source_id];
    sum += v.probability;
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [src, sn] : acc) {
    out[src] = sn.first / static_cast<double>(sn.second);
  }
  return out;
}

std::vector<std::pair<std::string, bool>> load_bot_labels(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("cannot open bot labels " + path.string());
  std::vector<std::pair<std::string, bool>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("post_id") ||
        !j["post_id"].is_string() || !j.contains("is_bot") ||
        !j["is_bot"].is_boolean()) {
      throw fatal_error("bot_labels.jsonl: malformed line " + std::to_string(n));
    }
    out.emplace_back(j["post_id"].get<std::string>(), j["is_bot"].get<bool>());
  }
  return out;
}

json to_json(const BotModel& m) {
  return {{"format", "datavoid.bot_model"},
          {"version", kModelFormatVersion},
          {"input_dim", m.input_dim},
          {"hidden", m.hidden},
          {"w1", m.w1},
          {"b1", m.b1},
          {"w2", m.w2},
          {"b2", m.b2},
          {"meta",
           {{"seed", m.meta.seed},
            {"epochs", m.meta.epochs},
            {"learning_rate", m.meta.learning_rate},
            {"l2", m.meta.l2},
            {"dataset_hash", m.meta.dataset_hash},
            {"feature_version", m.meta.feature_version}}}};
}

BotModel bot_model_from_json(const json& j) {
  if (j.value("format", std::string()) != "datavoid.bot_model" ||
      j.value("version", 0) != kModelFormatVersion) {
    throw validation_error("not a datavoid bot model (format/version)");
  }
  BotModel m;
  m.input_dim = j.at("input_dim").get<std::size_t>();
  m.hidden = j.at("hidden").get<std::size_t>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<double>();
  const auto& meta = j.at("meta");
  m.meta = {meta.at("seed").get<std::uint64_t>(),
            meta.at("epochs").get<std::size_t>(),
            meta.at("learning_rate").get<double>(),
            meta.at("l2").get<double>(),
            meta.at("dataset_hash").get<std::string>(),
            meta.at("feature_version").get<std::string>()};
  if (m.w1.size() != m.hidden * m.input_dim || m.b1.size() != m.hidden ||
      m.w2.size() != m.hidden) {
    throw validation_error("bot model weight shapes are inconsistent");
  }
  return m;
}

void save_bot_model(const BotModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fatal_error("cannot write " + path.string());
  out << to_json(model).dump() << '\n';
}

BotModel load_bot_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("cannot open bot model " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw validation_error("bot model is not valid JSON");
  return bot_model_from_json(j);
}

}  // namespace datavoid
