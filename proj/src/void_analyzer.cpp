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

#include "datavoid/void_analyzer.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "datavoid/error.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

using nlohmann::json;

namespace {

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

double percent(std::int64_t part, std::int64_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

json to_json(const AnnotatedPost& p) {
  json j = to_json(p.post);
  j["source_name"] = p.source_name;
  json leaning = to_json(p.leaning_score);
  leaning["label"] = std::string(to_string(p.leaning.label));
  leaning["epsilon"] = p.leaning.epsilon;
  j["annotations"] = {
      {"topic",
       {{"name", p.topic.topic},
        {"confidence", p.topic.confidence},
        {"method", std::string(to_string(p.topic.method))},
        {"probabilities", p.topic.probabilities}}},
      {"leaning", leaning},
      {"bot", {{"probability", p.bot.probability}, {"is_bot", p.bot.is_bot}}},
      {"source_category", to_json(p.source_category)}};
  return j;
}

AnnotatedPost annotated_post_from_json(const json& j) {
  auto v = validate_post(j);
  if (auto* fail = std::get_if<ValidationFailure>(&v)) {
    throw validation_error("annotated post: " + fail->reason);
  }
  if (!j.contains("annotations")) {
    throw validation_error("annotated post without annotations");
  }
  AnnotatedPost p;
  p.post = std::get<Post>(std::move(v));
  p.source_name = j.value("source_name", std::string());
  const json& a = j.at("annotations");

  const json& t = a.at("topic");
  p.topic.post_id = p.post.post_id;
  p.topic.topic = t.at("name").get<std::string>();
  p.topic.confidence = t.at("confidence").get<double>();
  p.topic.method = t.value("method", std::string("model")) == "weak_label"
                       ? TopicMethod::weak_label
                       : TopicMethod::model;
  if (t.contains("probabilities")) {
    p.topic.probabilities = t["probabilities"].get<std::vector<double>>();
  }

  const json& l = a.at("leaning");
  p.leaning_score.b_w = number_or_null(l, "b_w");
  p.leaning_score.b_a = number_or_null(l, "b_a");
  p.leaning_score.s = number_or_null(l, "s");
  p.leaning_score.final_score = l.at("final").get<double>();
  const auto rule = l.at("rule").get<std::string>();
  p.leaning_score.rule_used = rule == "page_website" ? LeaningRule::page_website
                              : rule == "mentions"   ? LeaningRule::mentions
                                                     : LeaningRule::neutral_default;
  auto label = parse_leaning(l.at("label").get<std::string>());
  if (!label) throw validation_error("annotated post: unknown leaning label");
  p.leaning.label = *label;
  p.leaning.epsilon = l.value("epsilon", kDefaultNeutralEpsilon);

  const json& b = a.at("bot");
  p.bot.post_id = p.post.post_id;
  p.bot.probability = b.at("probability").get<double>();
  p.bot.is_bot = b.at("is_bot").get<bool>();

  const json& c = a.at("source_category");
  auto cat = parse_category(c.at("category").get<std::string>());
  if (!cat) throw validation_error("annotated post: unknown source category");
  p.source_category.category = *cat;
  p.source_category.origin = c.value("origin", std::string()) == "override"
                                 ? CategoryOrigin::override
                                 : CategoryOrigin::automatic;
  if (c.contains("matched_evidence") && c["matched_evidence"].is_string()) {
    p.source_category.matched_evidence = c["matched_evidence"].get<std::string>();
  }
  return p;
}

void write_annotated_jsonl(std::span<const AnnotatedPost> posts, std::ostream& out) {
  for (const auto& p : posts) out << to_json(p).dump() << '\n';
}

std::vector<AnnotatedPost> read_annotated_jsonl(std::istream& in) {
  std::vector<AnnotatedPost> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw validation_error("annotated corpus: malformed line " + std::to_string(n));
    }
    out.push_back(annotated_post_from_json(j));
  }
  return out;
}

std::size_t SourceTypeCounts::get(Category c) const {
  switch (c) {
    case Category::news_media:
      return news_media;
    case Category::political:
      return political;
    case Category::citizen:
      return citizen;
  }
  return 0;
}

DashboardSummary summarize(std::span<const AnnotatedPost> posts,
                           const std::vector<std::string>& topics, std::size_t k,
                           SummaryMeta meta) {
  if (k == 0) throw validation_error("k must be >= 1");
  DashboardSummary s;
  s.topics = topics;
  s.k = k;
  s.meta = std::move(meta);
  s.total_posts = posts.size();
  for (const auto& t : topics) {
    s.posts_per_topic[t] = 0;
    s.engagement_totals[t] = {};
    s.posts_per_source_type[t] = {};
    s.bot_counts[t] = 0;
  }

  struct SourceTally {
    std::string name;
    Category category;
    std::size_t count = 0;
  };
  std::map<std::string, std::map<std::string, SourceTally>> per_topic_sources;
  EngagementTotals grand;

  for (const auto& p : posts) {
    auto it = s.posts_per_topic.find(p.topic.topic);
    if (it == s.posts_per_topic.end()) {
      throw validation_error("post " + p.post.post_id + " has unknown topic " +
                             p.topic.topic);
    }
    const std::string& t = it->first;
    ++it->second;

    auto& lc = s.leaning_counts[t];
    switch (p.leaning.label) {
      case Leaning::liberal:
        ++lc.liberal;
        break;
      case Leaning::conservative:
        ++lc.conservative;
        break;
      case Leaning::neutral:
        ++lc.neutral;
        break;
    }

    auto& e = s.engagement_totals[t];
    e.comments += p.post.comments;
    e.shares += p.post.shares;
    e.likes += p.post.likes;
    grand.comments += p.post.comments;
    grand.shares += p.post.shares;
    grand.likes += p.post.likes;

    auto& st = s.posts_per_source_type[t];
    switch (p.source_category.category) {
      case Category::news_media:
        ++st.news_media;
        break;
      case Category::political:
        ++st.political;
        break;
      case Category::citizen:
        ++st.citizen;
        break;
    }

    if (p.bot.is_bot) ++s.bot_counts[t];

    auto& tally = per_topic_sources[t][p.post.source_id];
    tally.name = p.source_name;
    tally.category = p.source_category.category;
    ++tally.count;

    const std::int64_t engagement = p.post.comments + p.post.shares;
    auto [top, inserted] =
        s.max_post_engagement.try_emplace(t, TopEngagement{p.post.post_id, engagement});
    if (!inserted && engagement > top->second.engagement) {
      top->second = {p.post.post_id, engagement};
    }
  }

  for (const auto& t : topics) {
    const std::size_t n = s.posts_per_topic[t];
    const auto& e = s.engagement_totals[t];
    s.engagement_share[t] = {percent(e.comments, grand.comments),
                             percent(e.shares, grand.shares)};
    s.bot_share[t] = percent(s.bot_counts[t], n);
    if (n > 0) {
      const auto& lc = s.leaning_counts[t];
      s.leaning_distribution[t] = {percent(lc.liberal, n),
                                   percent(lc.conservative, n),
                                   percent(lc.neutral, n)};
    }
    std::vector<FrequentSource> ranked;
    for (const auto& [id, tally] : per_topic_sources[t]) {
      ranked.push_back({id, tally.name, tally.category, tally.count});
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const FrequentSource& a, const FrequentSource& b) {
                if (a.count != b.count) return a.count > b.count;
                if (a.name != b.name) return a.name < b.name;
                return a.source_id < b.source_id;
              });
    if (ranked.size() > k) ranked.resize(k);
    s.frequent_sources[t] = std::move(ranked);
  }
  return s;
}

json to_json(const DashboardSummary& s) {
  json leaning_counts = json::object(), leaning_dist = json::object(),
       eng_totals = json::object(), eng_share = json::object(),
       source_types = json::object(), frequent = json::object(),
       max_eng = json::object();
  for (const auto& [t, c] : s.leaning_counts) {
    leaning_counts[t] = {{"liberal", c.liberal},
                         {"conservative", c.conservative},
                         {"neutral", c.neutral}};
  }
  for (const auto& [t, p] : s.leaning_distribution) {
    leaning_dist[t] = {{"liberal", p.liberal},
                       {"conservative", p.conservative},
                       {"neutral", p.neutral}};
  }
  for (const auto& [t, e] : s.engagement_totals) {
    eng_totals[t] = {{"comments", e.comments}, {"shares", e.shares}, {"likes", e.likes}};
  }
  for (const auto& [t, e] : s.engagement_share) {
    eng_share[t] = {{"comments", e.comments}, {"shares", e.shares}};
  }
  for (const auto& [t, c] : s.posts_per_source_type) {
    source_types[t] = {{"news_media", c.news_media},
                       {"political", c.political},
                       {"citizen", c.citizen}};
  }
  for (const auto& [t, list] : s.frequent_sources) {
    json arr = json::array();
    for (const auto& f : list) {
      arr.push_back({{"source_id", f.source_id},
                     {"name", f.name},
                     {"category", std::string(to_string(f.category))},
                     {"count", f.count}});
    }
    frequent[t] = arr;
  }
  for (const auto& [t, m] : s.max_post_engagement) {
    max_eng[t] = {{"post_id", m.post_id}, {"engagement", m.engagement}};
  }
  return {{"schema_version", 1},
          {"generated_at", s.meta.generated_at},
          {"corpus_hash", s.meta.corpus_hash},
          {"config_hash", s.meta.config_hash},
          {"k", s.k},
          {"topics", s.topics},
          {"total_posts", s.total_posts},
          {"posts_per_topic", s.posts_per_topic},
          {"leaning_counts", leaning_counts},
          {"leaning_distribution", leaning_dist},
          {"engagement_totals", eng_totals},
          {"engagement_share", eng_share},
          {"posts_per_source_type", source_types},
          {"bot_counts", s.bot_counts},
          {"bot_share", s.bot_share},
          {"frequent_sources", frequent},
          {"max_post_engagement", max_eng}};
}

DashboardSummary summary_from_json(const json& j) {
  if (j.value("schema_version", 0) != 1) {
    throw validation_error("summary: unsupported schema_version");
  }
  DashboardSummary s;
  s.meta = {j.at("generated_at").get<std::string>(),
            j.at("corpus_hash").get<std::string>(),
            j.at("config_hash").get<std::string>()};
  s.k = j.at("k").get<std::size_t>();
  s.topics = j.at("topics").get<std::vector<std::string>>();
  s.total_posts = j.at("total_posts").get<std::size_t>();
  s.posts_per_topic = j.at("posts_per_topic").get<std::map<std::string, std::size_t>>();
  for (const auto& [t, c] : j.at("leaning_counts").items()) {
    s.leaning_counts[t] = {c.at("liberal").get<std::size_t>(),
                           c.at("conservative").get<std::size_t>(),
                           c.at("neutral").get<std::size_t>()};
  }
  for (const auto& [t, p] : j.at("leaning_distribution").items()) {
    s.leaning_distribution[t] = {p.at("liberal").get<double>(),
                                 p.at("conservative").get<double>(),
                                 p.at("neutral").get<double>()};
  }
  for (const auto& [t, e] : j.at("engagement_totals").items()) {
    s.engagement_totals[t] = {e.at("comments").get<std::int64_t>(),
                              e.at("shares").get<std::int64_t>(),
                              e.at("likes").get<std::int64_t>()};
  }
  for (const auto& [t, e] : j.at("engagement_share").items()) {
    s.engagement_share[t] = {e.at("comments").get<double>(),
                             e.at("shares").get<double>()};
  }
  for (const auto& [t, c] : j.at("posts_per_source_type").items()) {
    s.posts_per_source_type[t] = {c.at("news_media").get<std::size_t>(),
                                  c.at("political").get<std::size_t>(),
                                  c.at("citizen").get<std::size_t>()};
  }
  s.bot_counts = j.at("bot_counts").get<std::map<std::string, std::size_t>>();
  s.bot_share = j.at("bot_share").get<std::map<std::string, double>>();
  for (const auto& [t, arr] : j.at("frequent_sources").items()) {
    auto& list = s.frequent_sources[t];
    for (const auto& f : arr) {
      auto cat = parse_category(f.at("category").get<std::string>());
      if (!cat) throw validation_error("summary: unknown category");
      list.push_back({f.at("source_id").get<std::string>(),
                      f.at("name").get<std::string>(), *cat,
                      f.at("count").get<std::size_t>()});
    }
  }
  for (const auto& [t, m] : j.at("max_post_engagement").items()) {
    s.max_post_engagement[t] = {m.at("post_id").get<std::string>(),
                                m.at("engagement").get<std::int64_t>()};
  }
  return s;
}

std::vector<AnnotatedPost> deep_dive(std::span<const AnnotatedPost> posts,
                                     const std::vector<std::string>& topics,
                                     const std::string& topic,
                                     std::optional<Leaning> leaning) {
  if (std::find(topics.begin(), topics.end(), topic) == topics.end()) {
    throw not_found_error("unknown topic: " + topic);
  }
  std::vector<AnnotatedPost> out;
  for (const auto& p : posts) {
    if (p.topic.topic != topic) continue;
    if (leaning && p.leaning.label != *leaning) continue;
    out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AnnotatedPost& a, const AnnotatedPost& b) {
                     return a.post.comments + a.post.shares >
                            b.post.comments + b.post.shares;
                   });
  return out;
}

std::string_view to_string(VoidLevel l) noexcept {
  switch (l) {
    case VoidLevel::topic:
      return "topic";
    case VoidLevel::leaning:
      return "leaning";
    case VoidLevel::source_type:
      return "source_type";
    case VoidLevel::combined:
      return "combined";
  }
  return "topic";
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double shortfall(double value, double threshold) {
  return threshold > 0.0 ? std::clamp((threshold - value) / threshold, 0.0, 1.0)
                         : 0.0;
}

}  // namespace

VoidReport detect_voids(const DashboardSummary& summary,
                        const VoidThresholds& thresholds) {
  VoidReport report;
  report.thresholds = thresholds;
  std::vector<double> counts;
  for (const auto& t : summary.topics) {
    auto it = summary.posts_per_topic.find(t);
    counts.push_back(it == summary.posts_per_topic.end()
                         ? 0.0
                         : static_cast<double>(it->second));
  }
  report.median_topic_count = median(counts);

  auto weight_of = [&](const std::string& t) {
    auto it = summary.engagement_share.find(t);
    if (it == summary.engagement_share.end()) return 0.0;
    return (it->second.comments + it->second.shares) / 200.0;
  };

  const double topic_bar = thresholds.alpha * report.median_topic_count;
  for (std::size_t i = 0; i < summary.topics.size(); ++i) {
    const std::string& t = summary.topics[i];
    const double n = counts[i];
    const double weight = weight_of(t);

    if (n < topic_bar) {
      VoidFinding f;
      f.level = VoidLevel::topic;
      f.topic = t;
      f.deficit = shortfall(n, topic_bar);
      f.severity = f.deficit * weight;
      f.evidence = {{"topic_count", n},
                    {"median", report.median_topic_count},
                    {"threshold", topic_bar}};
      report.findings.push_back(std::move(f));
    }
    if (n <= 0.0) continue;

    std::vector<VoidFinding> leaning_voids, type_voids;

    auto dist = summary.leaning_distribution.find(t);
    auto lcounts = summary.leaning_counts.find(t);
    if (dist != summary.leaning_distribution.end()) {
      const std::pair<Leaning, double> shares[] = {
          {Leaning::liberal, dist->second.liberal},
          {Leaning::conservative, dist->second.conservative},
          {Leaning::neutral, dist->second.neutral}};
      for (const auto& [leaning, pct] : shares) {
        if (!(pct < thresholds.tau)) continue;
        VoidFinding f;
        f.level = VoidLevel::leaning;
        f.topic = t;
        f.leaning = leaning;
        f.deficit = shortfall(pct, thresholds.tau);
        f.severity = f.deficit * weight;
        double count = 0.0;
        if (lcounts != summary.leaning_counts.end()) {
          count = static_cast<double>(
              leaning == Leaning::liberal        ? lcounts->second.liberal
              : leaning == Leaning::conservative ? lcounts->second.conservative
                                                 : lcounts->second.neutral);
        }
        f.evidence = {{"leaning_count", count},
                      {"topic_count", n},
                      {"percent", pct},
                      {"threshold", thresholds.tau}};
        leaning_voids.push_back(std::move(f));
      }
    }

    auto types = summary.posts_per_source_type.find(t);
    if (types != summary.posts_per_source_type.end()) {
      for (Category c : {Category::news_media, Category::political, Category::citizen}) {
        const auto count = static_cast<double>(types->second.get(c));
        const double pct = 100.0 * count / n;
        if (!(pct < thresholds.tau_c)) continue;
        VoidFinding f;
        f.level = VoidLevel::source_type;
        f.topic = t;
        f.source_type = c;
        f.deficit = shortfall(pct, thresholds.tau_c);
        f.severity = f.deficit * weight;
        f.evidence = {{"source_type_count", count},
                      {"topic_count", n},
                      {"percent", pct},
                      {"threshold", thresholds.tau_c}};
        type_voids.push_back(std::move(f));
      }
    }

    for (const auto& lv : leaning_voids) {
      for (const auto& tv : type_voids) {
        VoidFinding f;
        f.level = VoidLevel::combined;
        f.topic = t;
        f.leaning = lv.leaning;
        f.source_type = tv.source_type;
        f.deficit = 0.5 * (lv.deficit + tv.deficit);
        f.severity = f.deficit * weight;
        f.evidence = {{"leaning_count", lv.evidence.at("leaning_count")},
                      {"leaning_percent", lv.evidence.at("percent")},
                      {"source_type_count", tv.evidence.at("source_type_count")},
                      {"source_type_percent", tv.evidence.at("percent")},
                      {"topic_count", n}};
        report.findings.push_back(std::move(f));
      }
    }
    for (auto& f : leaning_voids) report.findings.push_back(std::move(f));
    for (auto& f : type_voids) report.findings.push_back(std::move(f));
  }

  auto key = [](const VoidFinding& f) {
    return std::make_tuple(-f.severity, static_cast<int>(f.level), f.topic,
                           f.leaning ? static_cast<int>(*f.leaning) : -1,
                           f.source_type ? static_cast<int>(*f.source_type) : -1);
  };
  std::sort(report.findings.begin(), report.findings.end(),
            [&](const VoidFinding& a, const VoidFinding& b) { return key(a) < key(b); });
  return report;
}

json to_json(const VoidReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) {
    findings.push_back(
        {{"level", std::string(to_string(f.level))},
         {"topic", f.topic},
         {"leaning", f.leaning ? json(std::string(to_string(*f.leaning))) : json(nullptr)},
         {"source_type",
          f.source_type ? json(std::string(to_string(*f.source_type))) : json(nullptr)},
         {"deficit", f.deficit},
         {"severity", f.severity},
         {"evidence", f.evidence}});
  }
  return {{"schema_version", 1},
          {"thresholds",
           {{"alpha", r.thresholds.alpha},
            {"tau", r.thresholds.tau},
            {"tau_c", r.thresholds.tau_c}}},
          {"median_topic_count", r.median_topic_count},
          {"findings", findings}};
}

}  // namespace datavoid
