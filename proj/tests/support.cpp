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

#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "datavoid/rng.hpp"

namespace dvtest {

using namespace datavoid;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "datavoid-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Timestamp ts(std::int64_t seconds) {
  // 2021-09-01T00:00:00Z
  return Timestamp(std::chrono::milliseconds((1630454400LL + seconds) * 1000));
}

Post make_post(std::string id, std::string source_id, std::string text,
               std::int64_t at_seconds, std::int64_t likes, std::int64_t comments,
               std::int64_t shares) {
  Post p;
  p.post_id = std::move(id);
  p.source_id = std::move(source_id);
  p.text = std::move(text);
  p.created_at = ts(at_seconds);
  p.likes = likes;
  p.comments = comments;
  p.shares = shares;
  return p;
}

Source make_source(std::string id, std::string name, std::string description,
                   SourceKind kind) {
  return Source{std::move(id), std::move(name), std::move(description), kind};
}

AnnotatedPost make_annotated(std::string id, std::string topic, Leaning leaning,
                             Category category, bool is_bot, std::int64_t comments,
                             std::int64_t shares, std::string source_id) {
  AnnotatedPost a;
  a.post = make_post(id, source_id, "text of " + id, 0, 0, comments, shares);
  a.source_name = "Source " + source_id;
  a.topic.post_id = id;
  a.topic.topic = std::move(topic);
  a.topic.confidence = 1.0;
  a.leaning.label = leaning;
  a.bot.post_id = id;
  a.bot.is_bot = is_bot;
  a.bot.probability = is_bot ? 1.0 : 0.0;
  a.source_category.category = category;
  return a;
}

KnowledgeBaseData sample_kb_data() {
  KnowledgeBaseData d;
  d.website_scores = {{"nytimes.com", -0.6}, {"foxnews.com", 0.7}, {"breitbart.com", 0.9}};
  d.actor_scores = {{"joe biden", -0.8}, {"greg abbott", 0.8}};
  d.news_site_names = {"the new york times", "fox news", "breitbart"};
  d.political_terms = default_political_terms();
  d.party_and_actor_names = {"republican party", "democratic party", "joe biden",
                             "greg abbott"};
  d.sentiment_lexicon = {{"good", 1.0}, {"bad", -1.0}, {"terrible", -1.0}, {"great", 0.8}};
  return d;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string title(std::string s) {
  bool start = true;
  for (auto& c : s) {
    if (start) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    start = c == ' ';
  }
  return s;
}

}  // namespace

LeaningFixture make_leaning_fixture(std::size_t n, std::uint64_t seed) {
  LeaningFixture fx;
  fx.kb.website_scores = {{"leftpost.org", -0.7},
                          {"rightwire.com", 0.8},
                          {"centrist.net", 0.1},
                          {"bluedaily.com", -0.4},
                          {"redherald.com", 0.6}};
  fx.kb.website_display_names = {{"daily planet", "bluedaily.com"}};
  fx.kb.actor_scores = {{"ann lee", -0.9}, {"bo grant", 0.7}, {"cy young", 0.3},
                        {"di moss", -0.2}};
  fx.kb.sentiment_lexicon = {{"great", 0.8}, {"fine", 0.3}, {"awful", -0.9},
                             {"weak", -0.4}, {"superb", 1.0}};
  fx.kb.political_terms = default_political_terms();

  fx.explicit_pages = {{"Left Post Page", "leftpost.org"},
                       {"Combo Page", "leftpost.org"},
                       {"Combo Page", "rightwire.com"}};
  fx.sources = {make_source("pg_left", "Left Post Page"),
                make_source("pg_red", "Red Herald"),  // derived from redherald.com
                make_source("pg_planet", "Daily Planet"),  // registered display name
                make_source("pg_combo", "Combo Page")};
  fx.source_domains = {{"pg_left", {"leftpost.org"}},
                       {"pg_red", {"redherald.com"}},
                       {"pg_planet", {"bluedaily.com"}},
                       {"pg_combo", {"leftpost.org", "rightwire.com"}}};
  std::vector<std::string> pages, groups;
  for (const auto& s : fx.sources) pages.push_back(s.source_id);
  for (int i = 1; i <= 8; ++i) {
    const std::string id = "grp" + std::to_string(i);
    fx.sources.push_back(make_source(id, "Citizens Circle " + std::to_string(i), "",
                                     SourceKind::group));
    groups.push_back(id);
  }

  const std::vector<std::string> filler = {
      "morning", "update", "community", "meeting", "river", "photo",   "market",
      "weekend", "annlee", "Leeway",    "greatness", "leftpost.organic", "mrleftpost.org",
      "bograntham", "fineness"};
  std::vector<std::string> liberal, conservative, all_entities;
  for (const auto& [d, s] : fx.kb.website_scores) (s < 0 ? liberal : conservative).push_back(d);
  for (const auto& [a, s] : fx.kb.actor_scores) (s < 0 ? liberal : conservative).push_back(a);
  all_entities = liberal;
  all_entities.insert(all_entities.end(), conservative.begin(), conservative.end());
  const std::vector<std::string> positive = {"great", "fine", "superb"};
  const std::vector<std::string> negative = {"awful", "weak"};
  std::vector<std::string> sentiment_words = positive;
  sentiment_words.insert(sentiment_words.end(), negative.begin(), negative.end());

  Rng rng(seed);
  auto surface = [&](const std::string& entity) -> std::string {
    const bool website = fx.kb.website_scores.count(entity) > 0;
    switch (rng.below(4)) {
      case 0:
        return website ? "https://www." + entity + "/story/" + std::to_string(rng.below(100))
                       : title(entity);
      case 1:
        return website ? upper(entity) : upper(entity);
      case 2:
        return website ? entity + "/news" : entity + ",";
      default:
        return website ? "http://" + entity : "(" + title(entity) + ")";
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    // Cases cycle so every rule class and every sign combination is present.
    const std::size_t c = i % 10;
    LeaningRecipe r;
    std::string source;
    std::vector<const std::vector<std::string>*> entity_pool;
    const std::vector<std::string>* sentiment_pool = &sentiment_words;
    bool with_mentions = true;
    if (c <= 1) {
      source = pick(rng, pages);
      with_mentions = rng.below(2) == 0;  // preempted by the page rule
    } else {
      source = pick(rng, groups);
      switch (c) {
        case 2:
          with_mentions = false;
          break;
        case 3:
          entity_pool = {&conservative};
          sentiment_pool = &positive;
          break;
        case 4:
          entity_pool = {&conservative};
          sentiment_pool = &negative;
          break;
        case 5:
          entity_pool = {&liberal};
          sentiment_pool = &positive;
          break;
        case 6:
          entity_pool = {&liberal};
          sentiment_pool = &negative;
          break;
        case 7:
          entity_pool = {&all_entities};
          sentiment_pool = nullptr;  // mentions without sentiment: s = 0
          break;
        default:
          entity_pool = {&all_entities};
          break;
      }
    }
    if (entity_pool.empty()) entity_pool = {&all_entities};

    std::vector<std::string> words;
    for (std::size_t k = 0, m = 2 + rng.below(4); k < m; ++k) words.push_back(pick(rng, filler));
    if (with_mentions) {
      std::vector<std::string> chosen;
      for (std::size_t k = 0, m = 1 + rng.below(3); k < m; ++k) {
        const auto& e = pick(rng, *entity_pool.front());
        if (std::find(chosen.begin(), chosen.end(), e) == chosen.end()) chosen.push_back(e);
        words.push_back(surface(e));
        if (rng.below(5) == 0) words.push_back(surface(e));  // repeat mention
      }
      for (const auto& e : chosen) {
        (fx.kb.website_scores.count(e) ? r.websites : r.actors).push_back(e);
      }
      if (sentiment_pool) {
        const std::size_t m = c >= 3 && c <= 6 ? 1 + rng.below(3) : rng.below(4);
        for (std::size_t k = 0; k < m; ++k) {
          const auto& w = pick(rng, *sentiment_pool);
          r.sentiment.push_back(fx.kb.sentiment_lexicon.at(w));
          words.push_back(rng.below(2) ? upper(w) + "!" : w);
        }
      }
    }
    rng.shuffle(words);
    fx.posts.push_back(make_post("lp" + std::to_string(i), source, join(words),
                                 static_cast<std::int64_t>(i) * 60));
    fx.recipes.push_back(std::move(r));
  }
  return fx;
}

OracleLeaning leaning_oracle(const LeaningFixture& fx, std::size_t post_index) {
  const Post& post = fx.posts[post_index];
  const LeaningRecipe& r = fx.recipes[post_index];
  OracleLeaning out;

  auto page = fx.source_domains.find(post.source_id);
  if (page != fx.source_domains.end() && !page->second.empty()) {
    double b_w = 0.0;
    for (const auto& d : page->second) b_w += fx.kb.website_scores.at(d);
    out.rule = LeaningRule::page_website;
    out.final_score = b_w / static_cast<double>(page->second.size());
    return out;
  }

  const std::size_t mentioned = r.websites.size() + r.actors.size();
  if (mentioned > 0) {
    double b_a = 0.0;
    for (const auto& d : r.websites) b_a += fx.kb.website_scores.at(d);
    for (const auto& a : r.actors) b_a += fx.kb.actor_scores.at(a);
    b_a /= static_cast<double>(mentioned);
    double s = 0.0;
    for (double w : r.sentiment) s += w;
    if (!r.sentiment.empty()) s /= static_cast<double>(r.sentiment.size());
    out.rule = LeaningRule::mentions;
    out.final_score = b_a * s;
    return out;
  }

  out.rule = LeaningRule::neutral_default;
  out.final_score = 0.0;
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::string> recount_topic(const std::string& text,
                                         const std::vector<Topic>& topics) {
  auto words = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      const auto c = static_cast<unsigned char>(ch);
      if (std::isalnum(c)) {
        cur += static_cast<char>(std::tolower(c));
      } else if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  };
  const auto tokens = words(text);
  std::optional<std::string> best;
  std::size_t best_hits = 0;
  for (const auto& topic : topics) {
    std::size_t hits = 0;
    for (const auto& kw : topic.keywords) {
      const auto phrase = words(kw);
      if (phrase.empty() || phrase.size() > tokens.size()) continue;
      bool found = false;
      for (std::size_t i = 0; i + phrase.size() <= tokens.size() && !found; ++i) {
        found = std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<long>(i));
      }
      if (found) ++hits;
    }
    if (hits > best_hits) {
      best_hits = hits;
      best = topic.name;
    }
  }
  return best;
}

TopicCorpus make_separable_topic_corpus(std::size_t topic_count, std::size_t posts_per_topic,
                                        std::uint64_t seed) {
  static const std::vector<std::string> kStems = {
      "harbor", "orchard", "glacier", "lantern", "meadow", "canyon", "copper", "falcon",
      "velvet", "thunder", "saddle", "pepper", "marble", "cobalt", "willow", "ember"};
  static const std::vector<std::string> kFiller = {
      "today", "people", "really", "think", "about", "again", "what", "more",
      "just",  "still",  "every",  "many",  "some",  "other", "there", "here"};
  if (topic_count > kStems.size()) throw std::invalid_argument("too many topics");

  TopicCorpus out;
  std::vector<std::vector<std::string>> vocab(topic_count);
  for (std::size_t t = 0; t < topic_count; ++t) {
    Topic topic;
    topic.name = "topic_" + kStems[t];
    for (int k = 0; k < 4; ++k) topic.keywords.push_back(kStems[t] + "kw" + std::to_string(k));
    for (int k = 0; k < 12; ++k) vocab[t].push_back(kStems[t] + "w" + std::to_string(k));
    out.topics.push_back(std::move(topic));
  }

  Rng rng(seed);
  std::vector<Post> posts;
  std::vector<std::pair<Post, std::string>> pending;
  for (std::size_t t = 0; t < topic_count; ++t) {
    for (std::size_t i = 0; i < posts_per_topic; ++i) {
      std::vector<std::string> words;
      for (std::size_t k = 0, m = 1 + rng.below(2); k < m; ++k)
        words.push_back(pick(rng, out.topics[t].keywords));
      for (std::size_t k = 0, m = 3 + rng.below(4); k < m; ++k) words.push_back(pick(rng, vocab[t]));
      for (std::size_t k = 0, m = 2 + rng.below(4); k < m; ++k) words.push_back(pick(rng, kFiller));
      rng.shuffle(words);
      pending.emplace_back(make_post("", "s1", join(words)), out.topics[t].name);
    }
  }
  rng.shuffle(pending);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    pending[i].first.post_id = "tp" + std::to_string(i);
    pending[i].first.created_at = ts(static_cast<std::int64_t>(i));
    posts.push_back(pending[i].first);
    out.truth.push_back(pending[i].second);
  }
  out.corpus = Corpus(std::move(posts), {make_source("s1", "Source One")});
  return out;
}

// ---------------------------------------------------------------------------

Post bot_like_post(std::uint64_t seed) {
  static const std::vector<std::string> kPromo = {"BUY", "NOW", "FREE", "GIFT", "CLICK",
                                                  "HERE", "WIN", "OFFER", "DEAL"};
  static const std::vector<std::string> kTags = {"#deal", "#win", "#free", "#promo"};
  Rng rng(seed);
  std::vector<std::string> words;
  for (std::size_t k = 0, m = 4 + rng.below(4); k < m; ++k) words.push_back(pick(rng, kPromo));
  const auto tag = pick(rng, kTags);
  words.push_back(tag);
  words.push_back(tag);
  words.push_back("http://promo.example/" + std::to_string(rng.below(1000)));
  words.push_back("@followers");
  words.push_back(pick(rng, kPromo));
  words.push_back(words.front());
  return make_post("b" + std::to_string(seed), "bot", join(words));
}

Post human_like_post(std::uint64_t seed) {
  static const std::vector<std::string> kWords = {
      "we",        "walked",    "along",     "river",     "yesterday", "with",
      "neighbors", "talking",   "about",     "school",    "board",     "budget",
      "thought",   "meeting",   "went",      "better",    "than",      "expected",
      "children",  "enjoyed",   "festival",  "downtown",  "weather",   "turned",
      "cold",      "evening",   "library",   "opened",    "reading",   "garden",
      "planted",   "tomatoes",  "grandmother", "recipe",  "kitchen",   "remember",
      "summer",    "parking",   "traffic",   "concert"};
  Rng rng(seed);
  std::vector<std::string> words;
  for (std::size_t k = 0, m = 8 + rng.below(8); k < m; ++k) words.push_back(pick(rng, kWords));
  return make_post("h" + std::to_string(seed), "human", join(words));
}

std::vector<LabeledFeatures> make_separable_bot_set(std::size_t per_class, std::uint64_t seed) {
  std::vector<LabeledFeatures> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back({extract_bot_features(bot_like_post(seed * 100003 + i), true), true});
    out.push_back({extract_bot_features(human_like_post(seed * 100003 + i), false), false});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> topic_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("topic" + std::to_string(i));
  return out;
}

std::vector<AnnotatedPost> random_annotated(std::size_t n, const std::vector<std::string>& topics,
                                            std::uint64_t seed) {
  static const Leaning kLeanings[] = {Leaning::liberal, Leaning::conservative, Leaning::neutral};
  static const Category kCategories[] = {Category::news_media, Category::political,
                                         Category::citizen};
  Rng rng(seed);
  std::vector<AnnotatedPost> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make_annotated("r" + std::to_string(i), pick(rng, topics),
                                 kLeanings[rng.below(3)], kCategories[rng.below(3)],
                                 rng.below(5) == 0,
                                 static_cast<std::int64_t>(rng.below(200)),
                                 static_cast<std::int64_t>(rng.below(100)),
                                 "s" + std::to_string(rng.below(50))));
  }
  return out;
}

PlantedVoids make_planted_voids(std::uint64_t seed) {
  static const Leaning kLeanings[] = {Leaning::liberal, Leaning::conservative, Leaning::neutral};
  static const Category kCategories[] = {Category::news_media, Category::political,
                                         Category::citizen};
  Rng rng(seed);
  PlantedVoids out;
  const std::size_t topic_count = 5 + rng.below(6);
  out.topics = topic_names(topic_count);
  const std::size_t thin = rng.below(topic_count);
  std::size_t one_sided = rng.below(topic_count - 1);
  if (one_sided >= thin) ++one_sided;
  out.thin_topic = out.topics[thin];
  out.no_conservative = out.topics[one_sided];

  std::size_t id = 0;
  for (std::size_t t = 0; t < topic_count; ++t) {
    // Normal topics hold 80..200 posts, so the median is at least 80 and the
    // thin topic (at most 15) stays under a quarter of it.
    const std::size_t count = t == thin ? 1 + rng.below(15) : 80 + rng.below(121);
    for (std::size_t i = 0; i < count; ++i) {
      Leaning l = kLeanings[rng.below(3)];
      if (t == one_sided && l == Leaning::conservative) {
        l = rng.below(2) ? Leaning::liberal : Leaning::neutral;
      }
      out.posts.push_back(make_annotated("v" + std::to_string(id++), out.topics[t], l,
                                         kCategories[rng.below(3)], rng.below(10) == 0,
                                         static_cast<std::int64_t>(rng.below(50)),
                                         static_cast<std::int64_t>(rng.below(50)),
                                         "s" + std::to_string(rng.below(20))));
    }
  }
  rng.shuffle(out.posts);
  return out;
}

std::vector<AnnotatedPost> four_post_fixture() {
  return {
      make_annotated("p1", "A", Leaning::liberal, Category::news_media, true, 10, 5, "s1"),
      make_annotated("p2", "A", Leaning::conservative, Category::political, false, 20, 15, "s2"),
      make_annotated("p3", "B", Leaning::neutral, Category::citizen, false, 30, 1, "s1"),
      make_annotated("p4", "B", Leaning::neutral, Category::citizen, false, 40, 0, "s2"),
  };
}

}  // namespace dvtest
