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

#include <doctest.h>

#include <string>

#include <nlohmann/json.hpp>

#include "datavoid/error.hpp"
#include "datavoid/pipeline.hpp"
#include "support.hpp"

using namespace datavoid;
using nlohmann::json;

namespace {

JobConfig fixture_job(const dvtest::fs::path& out) {
  return job_config_for_corpus_dir(dvtest::kFixturesDir, "topics.json", out);
}

json read_json(const dvtest::fs::path& p) { return json::parse(dvtest::read_file(p)); }

}  // namespace

TEST_CASE("corpus directory layout resolves every input") {
  dvtest::TempDir dir;
  const auto cfg = fixture_job(dir / "out");
  CHECK(cfg.posts == dvtest::kFixturesDir / "posts.jsonl");
  CHECK(cfg.kb_dir == dvtest::kFixturesDir / "kb");
  CHECK(cfg.topics == dvtest::kFixturesDir / "topics.json");
  REQUIRE(cfg.bot_labels);
  REQUIRE(cfg.page_websites);
  CHECK_NOTHROW(cfg.validate());

  const auto back = job_config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("validation names the offending field") {
  dvtest::TempDir dir;
  auto cfg = fixture_job(dir / "out");
  cfg.posts = dir / "missing.jsonl";
  try {
    cfg.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
    CHECK(std::string(e.what()).rfind("posts:", 0) == 0);
  }
  cfg = fixture_job(dir / "out");
  cfg.bot_labels.reset();
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = fixture_job(dir / "out");
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("relative config paths resolve against the config's directory") {
  const json j = {{"posts", "posts.jsonl"},   {"sources", "sources.jsonl"},
                  {"kb_dir", "kb"},           {"topics", "topics.json"},
                  {"out_dir", "/tmp/x"},      {"bot_labels", "bot_labels.jsonl"},
                  {"thresholds", {{"alpha", 0.5}}}, {"k", 3}};
  const auto cfg = job_config_from_json(j, dvtest::kFixturesDir);
  CHECK(cfg.posts == dvtest::kFixturesDir / "posts.jsonl");
  CHECK(cfg.out_dir == "/tmp/x");
  CHECK(cfg.thresholds.alpha == 0.5);
  CHECK(cfg.thresholds.tau == 10.0);
  CHECK(cfg.k == 3);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("full run writes every artifact") {
  dvtest::TempDir dir;
  Pipeline p(fixture_job(dir / "out"));
  const auto snap = p.run();
  for (const char* name :
       {"corpus_stats.json", "rejects.jsonl", "source_rejects.jsonl", "source_categories.jsonl",
        "labeled_set.json", "topic_model.json", "bot_model.json", "bot_metrics.json",
        "annotated_corpus.jsonl", "summary.json", "void_report.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir / "out" / name), name);
  }
  const auto stats = read_json(dir / "out/corpus_stats.json");
  CHECK(stats.at("rejected_posts") == 2);
  CHECK(snap->annotated.size() == snap->corpus->posts().size());
  CHECK(snap->summary.total_posts == snap->corpus->posts().size());

  const auto summary = read_json(dir / "out/summary.json");
  CHECK(summary.at("schema_version") == 1);
  CHECK(summary.at("config_hash") == snap->config_hash);
  CHECK(summary_from_json(summary) == snap->summary);

  // Sources fall where the knowledge base puts them.
  CHECK(snap->categories.at("s01").category == Category::news_media);
  CHECK(snap->categories.at("s04").category == Category::political);
  CHECK(snap->categories.at("s07").category == Category::citizen);
}

TEST_CASE("fixed seeds give identical outputs") {
  dvtest::TempDir a, b;
  Pipeline(fixture_job(a / "out")).run();
  Pipeline(fixture_job(b / "out")).run();
  for (const char* name : {"topic_model.json", "bot_model.json", "annotated_corpus.jsonl",
                           "void_report.json", "labeled_set.json"}) {
    CHECK_MESSAGE(dvtest::read_file(a / "out" / name) == dvtest::read_file(b / "out" / name),
                  name);
  }
  auto sa = read_json(a / "out/summary.json"), sb = read_json(b / "out/summary.json");
  sa.erase("generated_at");
  sb.erase("generated_at");
  CHECK(sa == sb);
}

TEST_CASE("strict mode fails after writing the rejects") {
  dvtest::TempDir dir;
  auto cfg = fixture_job(dir / "out");
  cfg.strict = true;
  Pipeline p(cfg);
  try {
    p.ingest();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
  CHECK(std::filesystem::exists(dir / "out/rejects.jsonl"));
}

TEST_CASE("a stale topic model is retrained") {
  dvtest::TempDir dir;
  Pipeline first(fixture_job(dir / "out"));
  first.train();
  const auto model_path = dir / "out/topic_model.json";

  // Drop a topic and point the job at the old model.
  auto topics = read_json(dvtest::kFixturesDir / "topics.json");
  topics.at("topics").erase(topics.at("topics").size() - 1);
  dvtest::write_file(dir / "topics.json", topics.dump());
  auto cfg = fixture_job(dir / "out2");
  cfg.topics = dir / "topics.json";
  cfg.topic_model = model_path;
  Pipeline second(cfg);
  second.train();
  CHECK(second.topic_model()->config_hash == second.topic_config().hash());
  CHECK(second.topic_model()->topics.size() == 4);
}

TEST_CASE("injected inputs replace the configured files") {
  dvtest::TempDir dir;
  Pipeline base(fixture_job(dir / "out"));
  base.train();

  Pipeline p(fixture_job(dir / "out2"));
  p.set_topic_model(base.topic_model());
  p.set_bot_model(base.bot_model());
  ParseResult parsed;
  parsed.corpus = Corpus({dvtest::make_post("x1", "s01", "inflation and jobs again")},
                         {dvtest::make_source("s01", "The New York Times")});
  p.set_corpus(std::move(parsed));
  const auto snap = p.run();
  REQUIRE(snap->annotated.size() == 1);
  CHECK(snap->annotated[0].topic.topic == "economy");
  CHECK(snap->annotated[0].leaning_score.rule_used == LeaningRule::page_website);
}
