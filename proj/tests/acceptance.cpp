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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "datavoid/bot.hpp"
#include "datavoid/gateway.hpp"
#include "datavoid/metrics.hpp"
#include "datavoid/pipeline.hpp"
#include "datavoid/rng.hpp"
#include "datavoid/topic_engine.hpp"
#include "support.hpp"

using namespace datavoid;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// -- metric reproduction ----------------------------------------------------

Outcome metrics_reproduction() {
  struct Case {
    ConfusionMatrix cm;
    double precision, recall, accuracy, f1;
  };
  const Case cases[] = {{{487, 153, 78, 465}, 76.09, 86.19, 80.47, 80.83},
                        {{32, 11, 2, 25}, 74.42, 94.12, 81.43, 83.12}};
  double worst = 0.0;
  Metrics results[2];
  const auto start = Clock::now();
  for (int i = 0; i < 2; ++i) results[i] = compute_metrics(cases[i].cm);
  const double elapsed = seconds_since(start);
  bool defined = true;
  for (int i = 0; i < 2; ++i) {
    const auto& m = results[i];
    const auto& c = cases[i];
    if (!m.precision || !m.recall || !m.f1) {
      defined = false;
      continue;
    }
    worst = std::max({worst, std::abs(*m.precision * 100 - c.precision),
                      std::abs(*m.recall * 100 - c.recall),
                      std::abs(m.accuracy * 100 - c.accuracy), std::abs(*m.f1 * 100 - c.f1)});
  }
  const bool pass = defined && worst <= 0.005 && elapsed < 1e-3;
  return {pass, "max deviation " + fmt(worst) + " pp, " + fmt(elapsed * 1e6, 1) + " us"};
}

// -- leaning cascade --------------------------------------------------------

Outcome leaning_oracle() {
  const auto fx = dvtest::make_leaning_fixture(500, 2021);
  const KnowledgeBase kb(fx.kb);
  PageWebsiteMap pages;
  for (const auto& [name, domain] : fx.explicit_pages) pages.add(name, domain);
  const Corpus corpus(fx.posts, fx.sources);
  const LexiconSentimentScorer scorer(kb);

  const auto start = Clock::now();
  std::vector<LeaningScore> scores;
  scores.reserve(fx.posts.size());
  for (const auto& p : fx.posts) {
    scores.push_back(leaning_score(p, *corpus.find_source(p.source_id), kb, pages, scorer));
  }
  const double elapsed = seconds_since(start);

  std::size_t agree = 0;
  std::set<std::string> cases;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto want = dvtest::leaning_oracle(fx, i);
    agree += scores[i].rule_used == want.rule &&
             std::abs(scores[i].final_score - want.final_score) <= 1e-12;
    if (scores[i].rule_used == LeaningRule::mentions) {
      const double b = *scores[i].b_a, s = *scores[i].s;
      cases.insert(std::string("b_a") + (b > 0 ? "+" : b < 0 ? "-" : "0") + "s" +
                   (s > 0 ? "+" : s < 0 ? "-" : "0"));
    } else {
      cases.insert(std::string(to_string(scores[i].rule_used)));
    }
  }
  const bool all_cases = cases.count("page_website") && cases.count("neutral_default") &&
                         cases.count("b_a+s+") && cases.count("b_a+s-") &&
                         cases.count("b_a-s+") && cases.count("b_a-s-");
  const bool pass = agree == fx.posts.size() && all_cases && elapsed < 1.0;
  return {pass, std::to_string(agree) + "/" + std::to_string(fx.posts.size()) + " agree, " +
                    std::to_string(cases.size()) + " rule/sign classes, " +
                    fmt(elapsed * 1e3, 2) + " ms"};
}

// -- topic pipeline ---------------------------------------------------------

Outcome topic_suite() {
  const auto start = Clock::now();
  const auto fx = dvtest::make_separable_topic_corpus(11, 150, 11);

  // Posts touching two topics exercise the hit count and tie rule.
  std::vector<Post> posts = fx.corpus.posts();
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto& a = fx.topics[rng.below(fx.topics.size())];
    const auto& b = fx.topics[rng.below(fx.topics.size())];
    std::string text = a.keywords[rng.below(4)] + " then " + b.keywords[rng.below(4)];
    if (rng.below(2)) text += " " + b.keywords[rng.below(4)];
    posts.push_back(dvtest::make_post("mix" + std::to_string(i), "s1", text));
  }
  const Corpus mixed(posts, fx.corpus.sources());
  const TopicConfig cfg(fx.topics);

  const auto set = weak_label(mixed, cfg, 42);
  std::size_t agree = 0;
  for (const auto& item : set.items) {
    agree += dvtest::recount_topic(mixed.find_post(item.post_id)->text, fx.topics) == item.topic;
  }

  auto run_once = [&] {
    const auto labeled = weak_label(fx.corpus, cfg, 42);
    const auto model = train_topic_model(labeled, fx.corpus, 42);
    const auto assigned = classify_topics(model, fx.corpus, cfg);
    std::ostringstream out;
    out << to_json(labeled).dump() << to_json(model).dump();
    for (const auto& a : assigned) {
      out << a.topic;
      for (double p : a.probabilities) out << ' ' << std::hexfloat << p;
    }
    return std::make_pair(model.validation_accuracy, out.str());
  };
  const auto first = run_once();
  const auto second = run_once();
  const double elapsed = seconds_since(start);

  const bool recount_ok = !set.items.empty() && agree == set.items.size();
  const bool identical = first.second == second.second;
  const bool pass = recount_ok && first.first >= 0.90 && identical && elapsed < 60.0;
  return {pass, "recount " + std::to_string(agree) + "/" + std::to_string(set.items.size()) +
                    ", 11-topic validation accuracy " + fmt(first.first) + ", reruns " +
                    (identical ? "bit-identical" : "DIFFER") + ", " + fmt(elapsed, 2) + " s"};
}

// -- aggregation conservation -----------------------------------------------

Outcome conservation() {
  const auto topics = dvtest::topic_names(11);
  double worst_leaning = 0, worst_engagement = 0, time_50k = 0;
  bool counts_ok = true;
  for (std::size_t n : {1000u, 5000u, 10000u, 25000u, 50000u}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto posts = dvtest::random_annotated(n, topics, n * 31 + seed);
      const auto start = Clock::now();
      const auto s = summarize(posts, topics);
      if (n == 50000) time_50k = std::max(time_50k, seconds_since(start));
      std::size_t total = 0;
      double comments = 0, shares = 0;
      for (const auto& t : topics) {
        total += s.posts_per_topic.at(t);
        comments += s.engagement_share.at(t).comments;
        shares += s.engagement_share.at(t).shares;
        auto d = s.leaning_distribution.find(t);
        if (d == s.leaning_distribution.end()) continue;
        worst_leaning = std::max(
            worst_leaning,
            std::abs(d->second.liberal + d->second.conservative + d->second.neutral - 100.0));
      }
      counts_ok = counts_ok && total == n;
      worst_engagement =
          std::max({worst_engagement, std::abs(comments - 100.0), std::abs(shares - 100.0)});
    }
  }
  const bool pass =
      counts_ok && worst_leaning <= 0.01 && worst_engagement <= 0.01 && time_50k < 10.0;
  return {pass, std::string("post counts ") + (counts_ok ? "conserved" : "NOT conserved") +
                    ", leaning sum error " + fmt(worst_leaning, 6) + ", engagement sum error " +
                    fmt(worst_engagement, 6) + ", 50k posts in " + fmt(time_50k, 3) + " s"};
}

// -- injected voids -----------------------------------------------------------

Outcome injected_voids() {
  std::size_t found = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto fx = dvtest::make_planted_voids(seed);
    const auto r = detect_voids(summarize(fx.posts, fx.topics));
    bool topic = false, leaning = false;
    for (const auto& f : r.findings) {
      topic = topic || (f.level == VoidLevel::topic && f.topic == fx.thin_topic);
      leaning = leaning || (f.level == VoidLevel::leaning && f.topic == fx.no_conservative &&
                            f.leaning == Leaning::conservative);
    }
    found += topic && leaning;
  }
  return {found == 100, std::to_string(found) + "/100 trials report both planted voids"};
}

// -- bot classifier -----------------------------------------------------------

Outcome bot_suite() {
  const auto set = dvtest::make_separable_bot_set(200, 1);
  const auto result = train_bot_model(set, 42);
  const double accuracy = result.holdout_metrics.accuracy;

  Rng rng(2024);
  std::vector<double> x(kBotFeatureDim);
  std::size_t in_bounds = 0;
  for (int i = 0; i < 10000; ++i) {
    const double scale = i % 4 == 0 ? 1.0 : i % 4 == 1 ? 10.0 : i % 4 == 2 ? 1e3 : 1e8;
    for (double& v : x) v = rng.uniform(-scale, scale);
    const double p = result.model.probability(x);
    in_bounds += p >= 0.0 && p <= 1.0;
  }

  std::size_t rule_ok = 0, rule_total = 0;
  auto check_rule = [&](double p) {
    ++rule_total;
    rule_ok += make_verdict("p", p).is_bot == (p >= 0.5);
  };
  for (double p : {0.0, 0.5, std::nextafter(0.5, 0.0), std::nextafter(0.5, 1.0), 1.0}) {
    check_rule(p);
  }
  for (int i = 0; i < 10000; ++i) check_rule(rng.uniform());
  // End to end: verdicts agree with the probability they report.
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto post = seed % 2 ? dvtest::bot_like_post(seed) : dvtest::human_like_post(seed);
    const auto v = classify_bot(result.model, post, seed % 2 == 1);
    ++rule_total;
    rule_ok += v.is_bot == (v.probability >= 0.5);
  }

  const bool pass = accuracy >= 0.95 && in_bounds == 10000 && rule_ok == rule_total;
  return {pass, "held-out accuracy " + fmt(accuracy) + ", " + std::to_string(in_bounds) +
                    "/10000 probabilities in [0,1], threshold rule " + std::to_string(rule_ok) +
                    "/" + std::to_string(rule_total)};
}

// -- service conformance ------------------------------------------------------

HttpResponse call(Gateway& g, const std::string& method, const std::string& path,
                  const std::string& body = {}) {
  HttpRequest r;
  r.method = method;
  r.path = path;
  r.body = body;
  return g.handle(r);
}

Outcome service_conformance() {
  dvtest::TempDir dir;
  GatewayOptions o;
  o.job = job_config_for_corpus_dir(dvtest::kFixturesDir, "topics.json", dir / "out");
  o.data_dir = dir / "data";

  bool summary_equal = false;
  std::size_t cas_ok = 0;
  {
    Gateway g(o);
    const auto snap = g.snapshot();
    const auto served = call(g, "GET", "/summary");
    const auto direct = summarize(snap->annotated, snap->topics, o.job.k, snap->summary.meta);
    summary_equal = served.status == 200 && json::parse(served.body) == to_json(direct) &&
                    served.body == to_json(direct).dump();

    for (int trial = 0; trial < 100; ++trial) {
      const std::string path = "/rooms/cas" + std::to_string(trial) + "/draft";
      std::atomic<int> ready{0};
      int status[2] = {0, 0};
      std::thread writers[2];
      for (int w = 0; w < 2; ++w) {
        writers[w] = std::thread([&, w] {
          ++ready;
          while (ready.load() < 2) {
          }
          status[w] = call(g, "PUT", path,
                           json{{"base_version", 0}, {"text", "writer " + std::to_string(w)}}
                               .dump())
                          .status;
        });
      }
      for (auto& t : writers) t.join();
      const auto draft = json::parse(call(g, "GET", path).body);
      const bool one_winner = (status[0] == 200) != (status[1] == 200) &&
                              (status[0] == 409 || status[1] == 409);
      cas_ok += one_winner && draft.at("version") == 1;
    }

    for (int i = 0; i < 300; ++i) {
      call(g, "POST", "/rooms/chat/messages",
           json{{"author", "a" + std::to_string(i % 4)}, {"text", "m" + std::to_string(i)}}
               .dump());
    }
  }

  bool dense = false;
  {
    Gateway g(o);
    const auto log = g.collab().messages("chat");
    dense = log.size() == 300;
    for (std::size_t i = 0; dense && i < log.size(); ++i) {
      dense = log[i].seq == i + 1 && log[i].text == "m" + std::to_string(i);
    }
    const auto next = call(g, "POST", "/rooms/chat/messages", R"({"author":"b","text":"after"})");
    dense = dense && next.status == 201 && json::parse(next.body).at("seq") == 301;
  }

  const bool pass = summary_equal && cas_ok == 100 && dense;
  return {pass, std::string("/summary ") + (summary_equal ? "equals" : "DIFFERS FROM") +
                    " summarize(), compare-and-set " + std::to_string(cas_ok) +
                    "/100, chat seq " + (dense ? "dense" : "NOT dense") + " after replay"};
}

}  // namespace

int main() {
  report("metric reproduction", metrics_reproduction);
  report("leaning cascade oracle", leaning_oracle);
  report("topic pipeline properties", topic_suite);
  report("aggregation conservation", conservation);
  report("injected void recall", injected_voids);
  report("bot classifier properties", bot_suite);
  report("service conformance", service_conformance);
  return failures == 0 ? 0 : 1;
}
