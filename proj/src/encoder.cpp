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

#include "datavoid/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "datavoid/error.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

using nlohmann::json;

std::shared_ptr<const BagOfTokensEncoder> BagOfTokensEncoder::fit(
    std::span<const std::string> texts, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& t : texts) {
    for (auto& tok : text::tokenize(t)) ++counts[std::move(tok)];
  }
  std::vector<std::string> vocab;
  for (auto& [tok, n] : counts) {
    if (n >= min_count) vocab.push_back(tok);
  }
  return std::make_shared<const BagOfTokensEncoder>(std::move(vocab));
}

BagOfTokensEncoder::BagOfTokensEncoder(std::vector<std::string> vocabulary)
    : vocabulary_(std::move(vocabulary)) {
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<std::uint32_t>(i)).second) {
      throw validation_error("duplicate vocabulary entry: " + vocabulary_[i]);
    }
  }
}

SparseVector BagOfTokensEncoder::encode(std::string_view input) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& tok : text::tokenize(input)) {
    auto it = index_.find(tok);
    if (it != index_.end()) tf[it->second] += 1.0;
  }
  SparseVector out;
  double norm = 0.0;
  for (auto& [idx, count] : tf) {
    const double v = 1.0 + std::log(count);
    out.indices.push_back(idx);
    out.values.push_back(v);
    norm += v * v;
  }
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& v : out.values) v /= norm;
  }
  return out;
}

json BagOfTokensEncoder::to_json() const {
  return {{"kind", "bag_of_tokens"}, {"vocabulary", vocabulary_}};
}

std::shared_ptr<const PrecomputedEmbeddingEncoder>
PrecomputedEmbeddingEncoder::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("cannot open embeddings file " + path.string());
  std::shared_ptr<PrecomputedEmbeddingEncoder> enc(
      new PrecomputedEmbeddingEncoder());
  enc->path_ = path;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("text") || !j["text"].is_string() ||
        !j.contains("vector") || !j["vector"].is_array()) {
      throw fatal_error("embeddings line " + std::to_string(n) + " malformed");
    }
    auto vec = j["vector"].get<std::vector<double>>();
    if (enc->dimension_ == 0) enc->dimension_ = vec.size();
    if (vec.size() != enc->dimension_ || vec.empty()) {
      throw fatal_error("embeddings line " + std::to_string(n) +
                        " has inconsistent dimension");
    }
    for (double v : vec) {
      if (!std::isfinite(v)) {
        throw fatal_error("embeddings line " + std::to_string(n) +
                          " has a non-finite value");
      }
    }
    enc->vectors_[j["text"].get<std::string>()] = std::move(vec);
  }
  return enc;
}

SparseVector PrecomputedEmbeddingEncoder::encode(std::string_view input) const {
  SparseVector out;
  auto it = vectors_.find(std::string(input));
  if (it == vectors_.end()) return out;
  for (std::size_t i = 0; i < it->second.size(); ++i) {
    if (it->second[i] != 0.0) {
      out.indices.push_back(static_cast<std::uint32_t>(i));
      out.values.push_back(it->second[i]);
    }
  }
  return out;
}

json PrecomputedEmbeddingEncoder::to_json() const {
  return {{"kind", "precomputed"},
          {"path", path_.string()},
          {"dimension", dimension_}};
}

std::shared_ptr<const TextEncoder> encoder_from_json(const json& j) {
  const auto kind = j.value("kind", std::string());
  if (kind == "bag_of_tokens") {
    return std::make_shared<const BagOfTokensEncoder>(
        j.at("vocabulary").get<std::vector<std::string>>());
  }
  if (kind == "precomputed") {
    auto enc = PrecomputedEmbeddingEncoder::load(j.at("path").get<std::string>());
    if (enc->dimension() != j.at("dimension").get<std::size_t>()) {
      throw fatal_error("embedding dimension changed since training");
    }
    return enc;
  }
  throw validation_error("unknown encoder kind: " + kind);
}

}  // namespace datavoid
