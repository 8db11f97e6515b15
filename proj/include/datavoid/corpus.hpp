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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace datavoid {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// RFC 3339: "2020-10-01T12:00:00Z", "2020-10-01T07:00:00.250-05:00".
std::optional<Timestamp> parse_timestamp(std::string_view text);
// UTC with a 'Z' suffix; milliseconds are printed only when non-zero.
std::string format_timestamp(Timestamp ts);

struct Post {
  std::string post_id;
  std::string source_id;
  std::string text;
  Timestamp created_at{};
  std::int64_t likes = 0;
  std::int64_t comments = 0;
  std::int64_t shares = 0;
  std::optional<std::string> language;

  bool operator==(const Post&) const = default;
};

enum class SourceKind { page, group };

std::string_view to_string(SourceKind kind) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept;

struct Source {
  std::string source_id;
  std::string name;
  std::string description;
  SourceKind kind = SourceKind::page;

  bool operator==(const Source&) const = default;
};

struct TimeWindow {
  Timestamp start{};
  Timestamp end{};

  bool contains(Timestamp ts) const { return ts >= start && ts <= end; }
  bool operator==(const TimeWindow&) const = default;
};

// Immutable post collection with referential integrity post -> source.
// Construction validates uniqueness and integrity and throws a validation
// Error otherwise.
class Corpus {
 public:
  Corpus() = default;
  // When `window` is empty it is derived from the post timestamps.
  Corpus(std::vector<Post> posts, std::vector<Source> sources,
         std::optional<TimeWindow> window = std::nullopt);

  const std::vector<Post>& posts() const noexcept { return posts_; }
  const std::vector<Source>& sources() const noexcept { return sources_; }
  // Empty only for a corpus without posts and without a declared window.
  const std::optional<TimeWindow>& time_window() const noexcept {
    return window_;
  }

  const Source* find_source(std::string_view source_id) const;
  const Post* find_post(std::string_view post_id) const;

  bool operator==(const Corpus& other) const {
    return posts_ == other.posts_ && sources_ == other.sources_ &&
           window_ == other.window_;
  }

 private:
  std::vector<Post> posts_;
  std::vector<Source> sources_;
  std::optional<TimeWindow> window_;
  std::unordered_map<std::string, std::size_t> source_index_;
  std::unordered_map<std::string, std::size_t> post_index_;
};

struct Rejection {
  std::size_t line_no = 0;  // 1-based
  std::string reason;

  bool operator==(const Rejection&) const = default;
};

struct ParseOptions {
  // Posts outside a declared window are kept and reported as warnings.
  std::optional<TimeWindow> declared_window;
};

struct ParseResult {
  Corpus corpus;
  std::vector<Rejection> post_rejects;
  std::vector<Rejection> source_rejects;
  std::vector<std::string> warnings;
  std::size_t post_lines = 0;
  std::size_t source_lines = 0;
};

// Reason string on rejection.
struct ValidationFailure {
  std::string reason;
};

std::variant<Post, ValidationFailure> validate_post(
    const nlohmann::json& record);
std::variant<Source, ValidationFailure> validate_source(
    const nlohmann::json& record);

// Parses posts.jsonl / sources.jsonl. Malformed lines land in the rejects
// lists; only an unreadable stream throws (fatal).
ParseResult parse_corpus(std::istream& posts, std::istream& sources,
                         const ParseOptions& options = {});
ParseResult parse_corpus_files(const std::filesystem::path& posts,
                               const std::filesystem::path& sources,
                               const ParseOptions& options = {});

nlohmann::json to_json(const Post& post);
nlohmann::json to_json(const Source& source);
nlohmann::json to_json(const Rejection& rejection);

void write_posts_jsonl(const Corpus& corpus, std::ostream& out);
void write_sources_jsonl(const Corpus& corpus, std::ostream& out);
void write_rejects_jsonl(const std::vector<Rejection>& rejects,
                         std::ostream& out);

struct CorpusStats {
  std::size_t post_count = 0;
  std::size_t source_count = 0;
  std::map<std::string, std::size_t> posts_per_source;  // every source listed
  std::optional<TimeWindow> date_range;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const Corpus& corpus);
nlohmann::json to_json(const CorpusStats& stats);

// Order-sensitive digest of the posts and sources.
std::string corpus_hash(const Corpus& corpus);

}  // namespace datavoid
