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

#include "datavoid/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "datavoid/error.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

using nlohmann::json;

namespace {

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len,
                 int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  for (std::size_t i = 0; i < len; ++i) {
    if (first[i] < '0' || first[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS
  int y, mo, d, h, mi, sec;
  if (s.size() < 20) return std::nullopt;
  if (!parse_fixed(s, 0, 4, y) || s[4] != '-' || !parse_fixed(s, 5, 2, mo) ||
      s[7] != '-' || !parse_fixed(s, 8, 2, d)) {
    return std::nullopt;
  }
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  if (!parse_fixed(s, 11, 2, h) || s[13] != ':' || !parse_fixed(s, 14, 2, mi) ||
      s[16] != ':' || !parse_fixed(s, 17, 2, sec)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  long long millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    int scale = 100;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;

  minutes offset{0};
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '-' ? -1 : 1;
    int oh, om;
    if (!parse_fixed(s, pos + 1, 2, oh) || pos + 3 >= s.size() ||
        s[pos + 3] != ':' || !parse_fixed(s, pos + 4, 2, om)) {
      return std::nullopt;
    }
    if (oh > 23 || om > 59) return std::nullopt;
    offset = minutes(sign * (oh * 60 + om));
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const auto local = sys_days(ymd) + hours(h) + minutes(mi) + seconds(sec) +
                     milliseconds(millis);
  return time_point_cast<milliseconds>(local - offset);
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{ts - day_point};
  char buf[40];
  const long long ms = tod.subseconds().count();
  if (ms != 0) {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()), ms);
  } else {
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
  }
  return buf;
}

std::string_view to_string(SourceKind kind) noexcept {
  return kind == SourceKind::group ? "group" : "page";
}

std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept {
  if (s == "page") return SourceKind::page;
  if (s == "group") return SourceKind::group;
  return std::nullopt;
}

Corpus::Corpus(std::vector<Post> posts, std::vector<Source> sources,
               std::optional<TimeWindow> window)
    : posts_(std::move(posts)), sources_(std::move(sources)) {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!source_index_.emplace(sources_[i].source_id, i).second) {
      throw validation_error("duplicate source_id: " + sources_[i].source_id);
    }
  }
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    const Post& p = posts_[i];
    if (!post_index_.emplace(p.post_id, i).second) {
      throw validation_error("duplicate post_id: " + p.post_id);
    }
    if (!source_index_.contains(p.source_id)) {
      throw validation_error("post " + p.post_id +
                             " references unknown source_id " + p.source_id);
    }
    if (p.likes < 0 || p.comments < 0 || p.shares < 0) {
      throw validation_error("negative engagement on post " + p.post_id);
    }
  }
  if (window) {
    window_ = window;
  } else if (!posts_.empty()) {
    auto [lo, hi] = std::minmax_element(
        posts_.begin(), posts_.end(),
        [](const Post& a, const Post& b) { return a.created_at < b.created_at; });
    window_ = TimeWindow{lo->created_at, hi->created_at};
  }
  // A declared window keeps out-of-window posts (they are warned about at
  // parse time), so it is widened to stay a valid bound.
  if (window_ && window) {
    for (const Post& p : posts_) {
      window_->start = std::min(window_->start, p.created_at);
      window_->end = std::max(window_->end, p.created_at);
    }
  }
}

const Source* Corpus::find_source(std::string_view source_id) const {
  auto it = source_index_.find(std::string(source_id));
  return it == source_index_.end() ? nullptr : &sources_[it->second];
}

const Post* Corpus::find_post(std::string_view post_id) const {
  auto it = post_index_.find(std::string(post_id));
  return it == post_index_.end() ? nullptr : &posts_[it->second];
}

namespace {

// Non-empty string, or an integer rendered in decimal (numeric ids are
// common in platform exports).
std::optional<std::string> id_field(const json& v) {
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
  }
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  return std::nullopt;
}

enum class CountStatus { ok, negative, invalid };

CountStatus count_field(const json& v, std::int64_t& out) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) return CountStatus::invalid;
    out = static_cast<std::int64_t>(u);
    return CountStatus::ok;
  }
  if (v.is_number_integer()) {
    out = v.get<std::int64_t>();
    return out < 0 ? CountStatus::negative : CountStatus::ok;
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d != static_cast<double>(static_cast<std::int64_t>(d))) {
      return CountStatus::invalid;
    }
    out = static_cast<std::int64_t>(d);
    return out < 0 ? CountStatus::negative : CountStatus::ok;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.empty()) return CountStatus::invalid;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      return CountStatus::invalid;
    }
    return out < 0 ? CountStatus::negative : CountStatus::ok;
  }
  return CountStatus::invalid;
}

bool present(const json& record, const char* key) {
  auto it = record.find(key);
  return it != record.end() && !it->is_null();
}

}  // namespace

std::variant<Post, ValidationFailure> validate_post(const json& record) {
  if (!record.is_object()) return ValidationFailure{"not a JSON object"};
  for (const char* field : {"post_id", "source_id", "text", "created_at",
                            "likes", "comments", "shares"}) {
    if (!present(record, field)) {
      return ValidationFailure{std::string("missing ") + field};
    }
  }
  Post post;
  auto id = id_field(record["post_id"]);
  if (!id) return ValidationFailure{"missing post_id"};
  post.post_id = std::move(*id);
  auto src = id_field(record["source_id"]);
  if (!src) return ValidationFailure{"missing source_id"};
  post.source_id = std::move(*src);

  if (!record["text"].is_string()) return ValidationFailure{"invalid text"};
  post.text = record["text"].get<std::string>();

  const json& ts = record["created_at"];
  if (!ts.is_string()) return ValidationFailure{"invalid created_at"};
  auto parsed = parse_timestamp(ts.get<std::string>());
  if (!parsed) return ValidationFailure{"invalid created_at"};
  post.created_at = *parsed;

  // Negative counts are reported ahead of malformed ones.
  std::int64_t* targets[] = {&post.likes, &post.comments, &post.shares};
  const char* names[] = {"likes", "comments", "shares"};
  std::optional<std::string> invalid;
  for (int i = 0; i < 3; ++i) {
    switch (count_field(record[names[i]], *targets[i])) {
      case CountStatus::ok:
        break;
      case CountStatus::negative:
        return ValidationFailure{"negative engagement"};
      case CountStatus::invalid:
        if (!invalid) invalid = std::string("invalid ") + names[i];
        break;
    }
  }
  if (invalid) return ValidationFailure{*invalid};

  if (present(record, "language")) {
    if (!record["language"].is_string()) {
      return ValidationFailure{"invalid language"};
    }
    post.language = record["language"].get<std::string>();
  }
  return post;
}

std::variant<Source, ValidationFailure> validate_source(const json& record) {
  if (!record.is_object()) return ValidationFailure{"not a JSON object"};
  Source source;
  if (!present(record, "source_id")) return ValidationFailure{"missing source_id"};
  auto id = id_field(record["source_id"]);
  if (!id) return ValidationFailure{"missing source_id"};
  source.source_id = std::move(*id);
  if (!present(record, "name")) return ValidationFailure{"missing name"};
  if (!record["name"].is_string()) return ValidationFailure{"invalid name"};
  source.name = record["name"].get<std::string>();
  if (present(record, "description")) {
    if (!record["description"].is_string()) {
      return ValidationFailure{"invalid description"};
    }
    source.description = record["description"].get<std::string>();
  }
  if (present(record, "kind")) {
    const json& k = record["kind"];
    auto kind = k.is_string() ? parse_source_kind(k.get<std::string>())
                              : std::nullopt;
    if (!kind) return ValidationFailure{"invalid kind"};
    source.kind = *kind;
  }
  return source;
}

namespace {

// Calls fn(line_no, line) for every line; a trailing newline does not start
// an extra line.
template <typename Fn>
std::size_t for_each_line(std::istream& in, const char* what, Fn&& fn) {
  if (!in) throw fatal_error(std::string("unreadable ") + what + " stream");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line_no, line);
  }
  if (in.bad()) throw fatal_error(std::string("read error on ") + what);
  return line_no;
}

std::optional<json> parse_line(std::string_view line, std::string& reason) {
  if (text::trim(line).empty()) {
    reason = "blank line";
    return std::nullopt;
  }
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) {
    reason = "malformed JSON";
    return std::nullopt;
  }
  return record;
}

}  // namespace

ParseResult parse_corpus(std::istream& posts_in, std::istream& sources_in,
                         const ParseOptions& options) {
  ParseResult result;
  std::vector<Source> sources;
  std::unordered_set<std::string> source_ids;
  result.source_lines = for_each_line(
      sources_in, "sources", [&](std::size_t line_no, const std::string& line) {
        std::string reason;
        auto record = parse_line(line, reason);
        if (!record) {
          result.source_rejects.push_back({line_no, reason});
          return;
        }
        auto v = validate_source(*record);
        if (auto* fail = std::get_if<ValidationFailure>(&v)) {
          result.source_rejects.push_back({line_no, fail->reason});
          return;
        }
        auto& src = std::get<Source>(v);
        if (!source_ids.insert(src.source_id).second) {
          result.source_rejects.push_back({line_no, "duplicate source_id"});
          return;
        }
        sources.push_back(std::move(src));
      });

  std::vector<Post> posts;
  std::unordered_set<std::string> post_ids;
  result.post_lines = for_each_line(
      posts_in, "posts", [&](std::size_t line_no, const std::string& line) {
        std::string reason;
        auto record = parse_line(line, reason);
        if (!record) {
          result.post_rejects.push_back({line_no, reason});
          return;
        }
        auto v = validate_post(*record);
        if (auto* fail = std::get_if<ValidationFailure>(&v)) {
          result.post_rejects.push_back({line_no, fail->reason});
          return;
        }
        auto& post = std::get<Post>(v);
        if (!source_ids.contains(post.source_id)) {
          result.post_rejects.push_back({line_no, "unknown source_id"});
          return;
        }
        if (!post_ids.insert(post.post_id).second) {
          result.post_rejects.push_back({line_no, "duplicate post_id"});
          return;
        }
        if (options.declared_window &&
            !options.declared_window->contains(post.created_at)) {
          result.warnings.push_back("line " + std::to_string(line_no) +
                                    ": post " + post.post_id +
                                    " outside declared time window");
        }
        posts.push_back(std::move(post));
      });

  result.corpus =
      Corpus(std::move(posts), std::move(sources), options.declared_window);
  return result;
}

ParseResult parse_corpus_files(const std::filesystem::path& posts,
                               const std::filesystem::path& sources,
                               const ParseOptions& options) {
  std::ifstream posts_in(posts, std::ios::binary);
  if (!posts_in) throw fatal_error("cannot open " + posts.string());
  std::ifstream sources_in(sources, std::ios::binary);
  if (!sources_in) throw fatal_error("cannot open " + sources.string());
  return parse_corpus(posts_in, sources_in, options);
}

json to_json(const Post& post) {
  json j = {{"post_id", post.post_id},
            {"source_id", post.source_id},
            {"text", post.text},
            {"created_at", format_timestamp(post.created_at)},
            {"likes", post.likes},
            {"comments", post.comments},
            {"shares", post.shares}};
  if (post.language) j["language"] = *post.language;
  return j;
}

json to_json(const Source& source) {
  return {{"source_id", source.source_id},
          {"name", source.name},
          {"description", source.description},
          {"kind", std::string(to_string(source.kind))}};
}

json to_json(const Rejection& rejection) {
  return {{"line_no", rejection.line_no}, {"reason", rejection.reason}};
}

void write_posts_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Post& p : corpus.posts()) out << to_json(p).dump() << '\n';
}

void write_sources_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Source& s : corpus.sources()) out << to_json(s).dump() << '\n';
}

void write_rejects_jsonl(const std::vector<Rejection>& rejects,
                         std::ostream& out) {
  for (const auto& r : rejects) out << to_json(r).dump() << '\n';
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.post_count = corpus.posts().size();
  stats.source_count = corpus.sources().size();
  for (const Source& s : corpus.sources()) stats.posts_per_source[s.source_id] = 0;
  for (const Post& p : corpus.posts()) {
    ++stats.posts_per_source[p.source_id];
    if (!stats.date_range) {
      stats.date_range = TimeWindow{p.created_at, p.created_at};
    } else {
      stats.date_range->start = std::min(stats.date_range->start, p.created_at);
      stats.date_range->end = std::max(stats.date_range->end, p.created_at);
    }
  }
  return stats;
}

json to_json(const CorpusStats& stats) {
  json j = {{"post_count", stats.post_count},
            {"source_count", stats.source_count},
            {"posts_per_source", stats.posts_per_source}};
  if (stats.date_range) {
    j["date_range"] = {format_timestamp(stats.date_range->start),
                       format_timestamp(stats.date_range->end)};
  } else {
    j["date_range"] = nullptr;
  }
  return j;
}

std::string corpus_hash(const Corpus& corpus) {
  std::uint64_t h = text::kFnvOffset;
  for (const Source& s : corpus.sources()) {
    h = text::fnv1a64(to_json(s).dump(), h);
    h = text::fnv1a64("\n", h);
  }
  for (const Post& p : corpus.posts()) {
    h = text::fnv1a64(to_json(p).dump(), h);
    h = text::fnv1a64("\n", h);
  }
  return text::hex64(h);
}

}  // namespace datavoid
