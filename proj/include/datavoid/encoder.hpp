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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace datavoid {

// Indices strictly increasing.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool empty() const noexcept { return indices.empty(); }
};

// text -> feature vector. Implementations are immutable once built.
class TextEncoder {
 public:
  virtual ~TextEncoder() = default;
  virtual std::size_t dimension() const = 0;
  virtual SparseVector encode(std::string_view text) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

// Unigram counts with sublinear scaling (1 + ln tf), L2-normalized. Tokens
// outside the vocabulary are dropped.
class BagOfTokensEncoder final : public TextEncoder {
 public:
  // Vocabulary = every token seen at least `min_count` times, sorted.
  static std::shared_ptr<const BagOfTokensEncoder> fit(
      std::span<const std::string> texts, std::size_t min_count = 1);

  explicit BagOfTokensEncoder(std::vector<std::string> vocabulary);

  std::size_t dimension() const override { return vocabulary_.size(); }
  SparseVector encode(std::string_view text) const override;
  nlohmann::json to_json() const override;

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Adapter for externally computed embeddings. The file is JSON Lines of
// {"text": ..., "vector": [...]}; texts not in the file encode to zeros.
class PrecomputedEmbeddingEncoder final : public TextEncoder {
 public:
  static std::shared_ptr<const PrecomputedEmbeddingEncoder> load(
      const std::filesystem::path& path);

  std::size_t dimension() const override { return dimension_; }
  SparseVector encode(std::string_view text) const override;
  nlohmann::json to_json() const override;

 private:
  PrecomputedEmbeddingEncoder() = default;

  std::filesystem::path path_;
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Rebuilds an encoder from TextEncoder::to_json output.
std::shared_ptr<const TextEncoder> encoder_from_json(const nlohmann::json& j);

}  // namespace datavoid
