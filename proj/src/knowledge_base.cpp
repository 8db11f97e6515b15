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

#include "datavoid/knowledge_base.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <unordered_set>

#include "datavoid/error.hpp"

namespace datavoid {
namespace {

bool in_range(double v) { return v >= -1.0 && v <= 1.0; }

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view unquote(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = unquote(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Line {
  std::size_t number;
  std::string content;
};

// Non-blank, non-comment lines with their 1-based line numbers.
std::vector<Line> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fatal_error("missing knowledge file: " + path.filename().string());
  std::vector<Line> lines;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.push_back({n, std::string(t)});
  }
  return lines;
}

struct ScoredRow {
  std::string key;
  double score;
  std::string extra;
};

// "key,score[,extra]" rows. A first row whose score column is not numeric is
// treated as a header. `split_last` splits key/score at the last comma so
// names may contain commas.
std::vector<ScoredRow> read_scored_csv(const std::filesystem::path& path,
                                       bool split_last) {
  const std::string file = path.filename().string();
  std::vector<ScoredRow> rows;
  bool first = true;
  for (const Line& line : read_lines(path)) {
    std::string_view content = line.content;
    std::string_view key, score_field, extra;
    if (split_last) {
      const auto comma = content.rfind(',');
      if (comma == std::string_view::npos) {
        throw fatal_error(file + ": expected 'name,score' line " +
                          std::to_string(line.number));
      }
      key = content.substr(0, comma);
      score_field = content.substr(comma + 1);
    } else {
      const auto c1 = content.find(',');
      if (c1 == std::string_view::npos) {
        throw fatal_error(file + ": expected 'key,score' line " +
                          std::to_string(line.number));
      }
      key = content.substr(0, c1);
      auto rest = content.substr(c1 + 1);
      const auto c2 = rest.find(',');
      score_field = rest.substr(0, c2);
      if (c2 != std::string_view::npos) extra = rest.substr(c2 + 1);
    }
    auto score = parse_number(score_field);
    if (!score) {
      if (first) {
        first = false;
        continue;
      }
      throw fatal_error(file + ": invalid score line " +
                        std::to_string(line.number));
    }
    first = false;
    if (!in_range(*score)) {
      throw fatal_error(file + ": score out of range line " +
                        std::to_string(line.number));
    }
    rows.push_back({std::string(unquote(key)), *score,
                    std::string(unquote(extra))});
  }
  return rows;
}

std::set<std::string> read_name_list(const std::filesystem::path& path) {
  std::set<std::string> names;
  for (const Line& line : read_lines(path)) {
    auto name = text::canonicalize_name(unquote(line.content));
    if (!name.empty()) names.insert(std::move(name));
  }
  return names;
}

std::string leading_label(std::string_view domain) {
  if (domain.starts_with("www.")) domain.remove_prefix(4);
  return std::string(domain.substr(0, domain.find('.')));
}

std::string without_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ') out.push_back(c);
  }
  return out;
}

}  // namespace

const std::set<std::string>& default_political_terms() {
  static const std::set<std::string> terms = {
      "political", "politics",  "politician",
      "election",  "electoral", "partisan"};
  return terms;
}

KnowledgeBase::KnowledgeBase(KnowledgeBaseData data) : data_(std::move(data)) {
  auto check = [](const std::map<std::string, double>& m, const char* what) {
    for (const auto& [k, v] : m) {
      if (!in_range(v)) {
        throw validation_error(std::string(what) + " score out of range: " + k);
      }
    }
  };
  check(data_.website_scores, "website");
  check(data_.actor_scores, "actor");
  check(data_.sentiment_lexicon, "lexicon");

  // Keys are re-canonicalized so hand-built data behaves like loaded data.
  auto recanon = [](const std::map<std::string, double>& m) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : m) out[text::canonicalize_name(k)] = v;
    return out;
  };
  auto recanon_set = [](const std::set<std::string>& s) {
    std::set<std::string> out;
    for (const auto& k : s) {
      auto c = text::canonicalize_name(k);
      if (!c.empty()) out.insert(std::move(c));
    }
    return out;
  };
  {
    std::map<std::string, double> websites;
    for (const auto& [k, v] : data_.website_scores) {
      websites[lower_ascii(text::trim(k))] = v;
    }
    data_.website_scores = std::move(websites);
    std::map<std::string, double> lexicon;
    for (const auto& [k, v] : data_.sentiment_lexicon) {
      lexicon[text::to_lower(text::trim(k))] = v;
    }
    data_.sentiment_lexicon = std::move(lexicon);
  }
  data_.actor_scores = recanon(data_.actor_scores);
  data_.news_site_names = recanon_set(data_.news_site_names);
  data_.political_terms = recanon_set(data_.political_terms);
  data_.party_and_actor_names = recanon_set(data_.party_and_actor_names);

  for (const auto& [name, score] : data_.actor_scores) {
    if (actor_matcher_.add(name) != SIZE_MAX) actor_names_.push_back(name);
  }
  for (const auto& term : data_.political_terms) {
    if (term_matcher_.add(term) != SIZE_MAX) term_list_.push_back(term);
  }
  for (const auto& name : data_.party_and_actor_names) {
    if (party_matcher_.add(name) != SIZE_MAX) party_list_.push_back(name);
  }
  for (const auto& name : data_.news_site_names) {
    if (news_matcher_.add(name) != SIZE_MAX) news_list_.push_back(name);
  }

  std::map<std::string, std::string> display;
  for (const auto& [name, domain] : data_.website_display_names) {
    const auto canon = text::canonicalize_name(name);
    const auto dom = lower_ascii(text::trim(domain));
    if (!data_.website_scores.contains(dom)) {
      throw validation_error("display name '" + name +
                             "' refers to unlisted domain " + dom);
    }
    display[canon] = dom;
    display_index_[canon].push_back(dom);
  }
  data_.website_display_names = std::move(display);
  for (const auto& [domain, score] : data_.website_scores) {
    const auto label = leading_label(domain);
    if (label.empty()) continue;
    auto& v = display_index_[label];
    if (std::find(v.begin(), v.end(), domain) == v.end()) v.push_back(domain);
  }
  for (auto& [name, domains] : display_index_) {
    std::sort(domains.begin(), domains.end());
  }
}

KnowledgeBaseCounts KnowledgeBase::counts() const {
  return {data_.website_scores.size(),   data_.actor_scores.size(),
          data_.news_site_names.size(),  data_.party_and_actor_names.size(),
          data_.sentiment_lexicon.size(), data_.political_terms.size()};
}

std::vector<std::string> KnowledgeBase::domains_for_display_name(
    std::string_view canonical_name) const {
  std::vector<std::string> out;
  auto add = [&](const std::string& key) {
    auto it = display_index_.find(key);
    if (it == display_index_.end()) return;
    for (const auto& d : it->second) {
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
  };
  const std::string name(canonical_name);
  if (name.empty()) return out;
  add(name);
  add(without_spaces(name));
  std::sort(out.begin(), out.end());
  return out;
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& dir) {
  KnowledgeBaseData data;
  for (const auto& row : read_scored_csv(dir / "websites.csv", false)) {
    const auto domain = lower_ascii(row.key);
    data.website_scores[domain] = row.score;
    if (!row.extra.empty()) data.website_display_names[row.extra] = domain;
  }
  for (const auto& row : read_scored_csv(dir / "actors.csv", true)) {
    data.actor_scores[text::canonicalize_name(row.key)] = row.score;
  }
  data.news_site_names = read_name_list(dir / "news_sites.txt");
  data.party_and_actor_names = read_name_list(dir / "parties_actors.txt");
  for (const auto& row : read_scored_csv(dir / "sentiment_lexicon.csv", true)) {
    data.sentiment_lexicon[text::to_lower(row.key)] = row.score;
  }
  const auto synonyms = dir / "political_synonyms.txt";
  if (std::filesystem::exists(synonyms)) {
    data.political_terms = read_name_list(synonyms);
    data.political_terms.insert("political");
  } else {
    data.political_terms = default_political_terms();
  }
  return KnowledgeBase(std::move(data));
}

namespace {

bool host_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
         c == '-';
}

// Longest listed domain that equals `host` or is a label-aligned suffix.
const std::string* lookup_host(std::string_view host,
                               const std::map<std::string, double>& sites) {
  while (!host.empty()) {
    auto it = sites.find(std::string(host));
    if (it != sites.end()) return &it->first;
    const auto dot = host.find('.');
    if (dot == std::string_view::npos) break;
    host.remove_prefix(dot + 1);
  }
  return nullptr;
}

}  // namespace

EntityMentions match_entities(std::string_view input, const KnowledgeBase& kb,
                              const MatchOptions& options) {
  EntityMentions out;
  const auto& sites = kb.data().website_scores;
  if (!sites.empty()) {
    std::unordered_set<std::string> seen;
    for (auto piece : text::split_whitespace(input)) {
      const std::string lowered = lower_ascii(piece);
      std::size_t i = 0;
      while (i < lowered.size()) {
        while (i < lowered.size() && !host_char(lowered[i])) ++i;
        std::size_t start = i;
        while (i < lowered.size() && host_char(lowered[i])) ++i;
        std::string_view cand(lowered.data() + start, i - start);
        while (!cand.empty() && (cand.front() == '.' || cand.front() == '-')) {
          cand.remove_prefix(1);
        }
        while (!cand.empty() && (cand.back() == '.' || cand.back() == '-')) {
          cand.remove_suffix(1);
        }
        if (cand.find('.') == std::string_view::npos) continue;
        if (const std::string* domain = lookup_host(cand, sites)) {
          if (seen.insert(*domain).second) {
            out.websites.push_back({*domain, sites.at(*domain)});
          }
        }
      }
    }
  }

  const auto& actors = kb.data().actor_scores;
  if (!actors.empty()) {
    const auto tokens = text::tokenize(input);
    if (options.actors == ActorMatching::whole_phrase) {
      for (std::size_t id : kb.actor_matcher().find_all(tokens)) {
        const auto& name = kb.actor_names()[id];
        out.actors.push_back({name, actors.at(name)});
      }
    } else {
      std::string joined;
      for (const auto& t : tokens) {
        if (!joined.empty()) joined.push_back(' ');
        joined += t;
      }
      std::vector<std::pair<std::size_t, std::string>> hits;
      for (const auto& [name, score] : actors) {
        const auto pos = joined.find(name);
        if (!name.empty() && pos != std::string::npos) hits.emplace_back(pos, name);
      }
      std::sort(hits.begin(), hits.end());
      for (const auto& [pos, name] : hits) {
        out.actors.push_back({name, actors.at(name)});
      }
    }
  }
  return out;
}

}  // namespace datavoid
