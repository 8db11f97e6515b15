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

#include "datavoid/gateway.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "datavoid/error.hpp"

namespace datavoid {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string now_rfc3339() {
  return format_timestamp(std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now()));
}

HttpResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

HttpResponse error_response(int status, std::string_view code, const std::string& message,
                            const std::string& field = {}) {
  json err = {{"code", code}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  return json_response(status, {{"error", err}});
}

// Messages of the form "field: detail" name the offending field.
std::string field_of(const std::string& message) {
  const auto colon = message.find(": ");
  if (colon == std::string::npos || colon == 0) return {};
  const auto head = message.substr(0, colon);
  for (char c : head) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return {};
  }
  return head;
}

HttpResponse from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::validation:
      return error_response(400, "validation", e.what(), field_of(e.what()));
    case ErrorCode::not_found:
      return error_response(404, "not_found", e.what());
    case ErrorCode::conflict:
      return error_response(409, "conflict", e.what());
    case ErrorCode::fatal:
      break;
  }
  return error_response(500, "fatal", e.what());
}

json parse_body(const HttpRequest& r) {
  json j = json::parse(r.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw validation_error("body: expected a JSON object");
  }
  return j;
}

std::optional<std::string> query_param(const HttpRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end()) return std::nullopt;
  return it->second;
}

double query_double(const HttpRequest& r, const std::string& key, double fallback) {
  auto v = query_param(r, key);
  if (!v) return fallback;
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v->c_str(), &end);
  if (v->empty() || end != v->c_str() + v->size() || errno != 0 || !std::isfinite(d)) {
    throw validation_error(key + ": expected a number");
  }
  return d;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.size() > 19 ||
      v.find_first_not_of("0123456789") != std::string::npos) {
    throw validation_error(key + ": expected a non-negative integer");
  }
  return std::stoull(v);
}

std::uint64_t query_uint(const HttpRequest& r, const std::string& key,
                         std::uint64_t fallback) {
  auto v = query_param(r, key);
  return v ? parse_uint(key, *v) : fallback;
}

std::string body_string(const json& body, const char* key, bool required = true) {
  if (!body.contains(key) || body[key].is_null()) {
    if (required) throw validation_error(std::string(key) + ": required");
    return {};
  }
  if (!body[key].is_string()) {
    throw validation_error(std::string(key) + ": expected a string");
  }
  return body[key].get<std::string>();
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Posts for an upload arrive either as an array of objects or as a JSON
// Lines string.
std::string jsonl_field(const json& body, const char* array_key, const char* text_key) {
  if (body.contains(array_key)) {
    const auto& arr = body[array_key];
    if (!arr.is_array()) throw validation_error(std::string(array_key) + ": expected an array");
    std::string out;
    for (const auto& item : arr) out += item.dump() + "\n";
    return out;
  }
  if (body.contains(text_key)) {
    if (!body[text_key].is_string()) {
      throw validation_error(std::string(text_key) + ": expected a string");
    }
    return body[text_key].get<std::string>();
  }
  throw validation_error(std::string(array_key) + ": required");
}

json snapshot_ids(const AnalysisSnapshot& s) {
  return {{"corpus_hash", s.corpus_hash}, {"config_hash", s.config_hash}};
}

HttpResponse hash_conflict(const std::string& given, const AnalysisSnapshot& s) {
  json err = {{"code", "conflict"},
              {"message", "config hash mismatch between model and corpus"},
              {"field", "config_hash"},
              {"expected", s.config_hash},
              {"given", given}};
  return json_response(409, {{"error", err}});
}

}  // namespace

std::string_view to_string(JobState s) noexcept {
  switch (s) {
    case JobState::queued:
      return "queued";
    case JobState::running:
      return "running";
    case JobState::succeeded:
      return "succeeded";
    case JobState::failed:
      return "failed";
  }
  return "queued";
}

GatewayOptions gateway_options_from_env(JobConfig job) {
  GatewayOptions o;
  if (const char* dir = std::getenv("DATAVOID_DATA_DIR"); dir && *dir) {
    o.data_dir = dir;
  } else {
    o.data_dir = job.out_dir / "data";
  }
  if (const char* token = std::getenv("DATAVOID_API_TOKEN"); token && *token) {
    o.api_token = token;
  }
  o.job = std::move(job);
  return o;
}

Gateway::Gateway(GatewayOptions options) : options_(std::move(options)) {
  if (!options_.translator) options_.translator = std::make_shared<IdentityTranslator>();
  fs::create_directories(options_.data_dir);
  if (!options_.job.overrides) options_.job.overrides = options_.data_dir / "overrides.jsonl";
  overrides_ = std::make_shared<OverrideStore>(*options_.job.overrides);
  collab_ = std::make_unique<CollabStore>(options_.data_dir / "rooms");

  Pipeline p(options_.job);
  p.set_override_store(overrides_);
  auto first = p.run();
  kb_ = p.shared_knowledge_base();
  topic_config_ = std::make_shared<const TopicConfig>(p.topic_config());
  topic_model_ = p.topic_model();
  bot_model_ = p.bot_model();
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(first);
}

Gateway::~Gateway() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(jobs_mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    if (t.joinable()) t.join();
  }
}

std::shared_ptr<const AnalysisSnapshot> Gateway::snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return snapshot_;
}

std::optional<JobStatus> Gateway::job(const std::string& id) const {
  std::lock_guard lock(jobs_mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void Gateway::wait_idle() {
  std::unique_lock lock(jobs_mu_);
  jobs_cv_.wait(lock, [&] { return active_jobs_ == 0; });
}

void Gateway::publish(const AnalysisSnapshot* base) {
  std::lock_guard lock(write_mu_);
  auto current = base ? nullptr : snapshot();
  auto next = std::make_shared<AnalysisSnapshot>(base ? *base : *current);
  bool changed = false;
  for (const auto& [id, rec] : overrides_->snapshot()) {
    if (!next->corpus->find_source(id)) continue;
    SourceCategory c{rec.category, CategoryOrigin::override, std::nullopt};
    auto it = next->categories.find(id);
    if (it != next->categories.end() && it->second == c) continue;
    next->categories[id] = c;
    changed = true;
  }
  if (changed) {
    for (auto& p : next->annotated) p.source_category = next->categories.at(p.post.source_id);
    SummaryMeta meta = next->summary.meta;
    meta.generated_at = now_rfc3339();
    next->summary = summarize(next->annotated, next->topics, next->summary.k, meta);
    next->voids = detect_voids(next->summary, next->thresholds);
  }
  std::lock_guard slock(snapshot_mu_);
  snapshot_ = std::move(next);
}

std::string Gateway::submit_job(std::string kind,
                                std::function<json(const std::string& id)> work) {
  std::string id;
  {
    std::lock_guard lock(jobs_mu_);
    id = "job-" + std::to_string(next_job_++);
    JobStatus s;
    s.id = id;
    s.kind = std::move(kind);
    s.submitted_at = now_rfc3339();
    jobs_[id] = s;
    ++active_jobs_;
    workers_.emplace_back([this, id, work = std::move(work)] {
      std::lock_guard run(job_run_mu_);
      {
        std::lock_guard lock(jobs_mu_);
        jobs_[id].state = JobState::running;
      }
      json result;
      std::string error;
      try {
        result = work(id);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(jobs_mu_);
      auto& s = jobs_[id];
      s.finished_at = now_rfc3339();
      if (error.empty()) {
        s.state = JobState::succeeded;
        s.result = std::move(result);
      } else {
        s.state = JobState::failed;
        s.error = std::move(error);
      }
      --active_jobs_;
      jobs_cv_.notify_all();
    });
  }
  return id;
}

HttpResponse Gateway::handle(const HttpRequest& r) {
  try {
    if (options_.api_token && r.path != "/health") {
      const auto& h = r.headers;
      auto auth = h.find("authorization");
      auto token = h.find("x-api-token");
      const bool ok = (auth != h.end() && auth->second == "Bearer " + *options_.api_token) ||
                      (token != h.end() && token->second == *options_.api_token);
      if (!ok) return error_response(401, "unauthorized", "missing or invalid API token");
    }
    return dispatch(r);
  } catch (const Error& e) {
    return from_error(e);
  } catch (const json::exception& e) {
    return error_response(400, "validation", e.what(), "body");
  } catch (const std::exception& e) {
    return error_response(500, "fatal", e.what());
  }
}

HttpResponse Gateway::dispatch(const HttpRequest& r) {
  const auto seg = split_path(r.path);
  const std::string& m = r.method;
  auto method_not_allowed = [] {
    return error_response(405, "method_not_allowed", "method not allowed");
  };

  if (seg.size() == 1 && seg[0] == "health") {
    return m == "GET" ? get_health() : method_not_allowed();
  }
  if (seg.size() == 1 && seg[0] == "summary") {
    return m == "GET" ? get_summary(r) : method_not_allowed();
  }
  if (seg.size() == 1 && seg[0] == "voids") {
    return m == "GET" ? get_voids(r) : method_not_allowed();
  }
  if (seg.size() == 1 && seg[0] == "corpus") {
    return m == "POST" ? post_corpus(r) : method_not_allowed();
  }
  if (seg.size() == 1 && seg[0] == "translate") {
    return m == "POST" ? post_translate(r) : method_not_allowed();
  }
  if (seg.size() == 2 && seg[0] == "config" && seg[1] == "topics") {
    return m == "POST" ? post_topics(r) : method_not_allowed();
  }
  if (seg.size() == 2 && seg[0] == "jobs") {
    return m == "GET" ? get_job(seg[1]) : method_not_allowed();
  }
  if (seg.size() == 3 && seg[0] == "topics" && seg[2] == "posts") {
    return m == "GET" ? get_topic_posts(seg[1], r) : method_not_allowed();
  }
  if (seg.size() == 3 && seg[0] == "sources" && seg[2] == "category") {
    if (m == "GET") return get_source_category(seg[1]);
    if (m == "PATCH") return patch_source_category(seg[1], r);
    return method_not_allowed();
  }
  if (seg.size() >= 2 && seg[0] == "rooms") {
    const std::string& room = seg[1];
    if (!valid_room_id(room)) throw validation_error("room_id: invalid room id");
    if (seg.size() == 2) return m == "GET" ? get_room(room) : method_not_allowed();
    if (seg.size() == 3 && seg[2] == "messages") {
      if (m == "POST") return post_message(room, r);
      if (m == "GET") return get_messages(room, r);
      return method_not_allowed();
    }
    if (seg.size() == 3 && seg[2] == "events") {
      return m == "GET" ? get_events(room, r) : method_not_allowed();
    }
    if (seg.size() == 3 && seg[2] == "draft") {
      if (m == "GET") return get_draft(room);
      if (m == "PUT") return put_draft(room, r);
      return method_not_allowed();
    }
  }
  return error_response(404, "not_found", "no route for " + r.path);
}

HttpResponse Gateway::get_health() {
  auto s = snapshot();
  std::size_t active;
  {
    std::lock_guard lock(jobs_mu_);
    active = active_jobs_;
  }
  json body = snapshot_ids(*s);
  body["status"] = "ok";
  body["posts"] = s->corpus->posts().size();
  body["active_jobs"] = active;
  return json_response(200, body);
}

HttpResponse Gateway::get_summary(const HttpRequest& r) {
  auto s = snapshot();
  if (auto h = query_param(r, "config_hash"); h && *h != s->config_hash) {
    return hash_conflict(*h, *s);
  }
  return json_response(200, to_json(s->summary));
}

HttpResponse Gateway::get_topic_posts(const std::string& topic, const HttpRequest& r) {
  auto s = snapshot();
  if (auto h = query_param(r, "config_hash"); h && *h != s->config_hash) {
    return hash_conflict(*h, *s);
  }
  std::optional<Leaning> leaning;
  if (auto l = query_param(r, "leaning"); l && !l->empty()) {
    leaning = parse_leaning(*l);
    if (!leaning) throw validation_error("leaning: expected liberal, conservative or neutral");
  }
  const auto limit = query_uint(r, "limit", 0);
  auto posts = deep_dive(s->annotated, s->topics, topic, leaning);
  json arr = json::array();
  for (std::size_t i = 0; i < posts.size() && (limit == 0 || i < limit); ++i) {
    arr.push_back(to_json(posts[i]));
  }
  return json_response(200, {{"topic", topic},
                             {"leaning", leaning ? json(std::string(to_string(*leaning)))
                                                 : json(nullptr)},
                             {"count", posts.size()},
                             {"posts", arr}});
}

HttpResponse Gateway::get_voids(const HttpRequest& r) {
  auto s = snapshot();
  VoidThresholds t = s->thresholds;
  t.alpha = query_double(r, "alpha", t.alpha);
  t.tau = query_double(r, "tau", t.tau);
  t.tau_c = query_double(r, "tau_c", t.tau_c);
  if (t.alpha < 0.0) throw validation_error("alpha: must be >= 0");
  if (t.tau < 0.0 || t.tau > 100.0) throw validation_error("tau: must be in [0, 100]");
  if (t.tau_c < 0.0 || t.tau_c > 100.0) throw validation_error("tau_c: must be in [0, 100]");
  return json_response(200, to_json(detect_voids(s->summary, t)));
}

HttpResponse Gateway::post_corpus(const HttpRequest& r) {
  const json body = parse_body(r);
  auto s = snapshot();
  if (body.contains("config_hash")) {
    const auto h = body_string(body, "config_hash");
    if (h != s->config_hash) return hash_conflict(h, *s);
  }
  std::istringstream posts(jsonl_field(body, "posts", "posts_jsonl"));
  std::istringstream sources(jsonl_field(body, "sources", "sources_jsonl"));
  auto parsed = std::make_shared<ParseResult>(parse_corpus(posts, sources));
  const json counts = {{"accepted_posts", parsed->corpus.posts().size()},
                       {"rejected_posts", parsed->post_rejects.size()},
                       {"rejected_sources", parsed->source_rejects.size()}};

  const std::string id = submit_job("corpus", [this, parsed](const std::string& job_id) {
    JobConfig cfg = options_.job;
    cfg.out_dir = options_.data_dir / "jobs" / job_id;
    cfg.strict = false;
    Pipeline p(cfg);
    p.set_corpus(std::move(*parsed));
    p.set_knowledge_base(kb_);
    p.set_override_store(overrides_);
    {
      std::lock_guard lock(model_mu_);
      p.set_topic_config(topic_config_);
      p.set_topic_model(topic_model_);
      p.set_bot_model(bot_model_);
    }
    auto next = p.run();
    publish(next.get());
    return json{{"posts", next->corpus->posts().size()},
                {"corpus_hash", next->corpus_hash},
                {"config_hash", next->config_hash}};
  });
  json out = counts;
  out["job_id"] = id;
  out["status_url"] = "/jobs/" + id;
  return json_response(202, out);
}

HttpResponse Gateway::get_job(const std::string& id) {
  auto j = job(id);
  if (!j) throw not_found_error("unknown job: " + id);
  json body = {{"job_id", j->id},
               {"kind", j->kind},
               {"state", std::string(to_string(j->state))},
               {"submitted_at", j->submitted_at},
               {"finished_at", j->finished_at.empty() ? json(nullptr) : json(j->finished_at)},
               {"error", j->error.empty() ? json(nullptr) : json(j->error)},
               {"result", j->result}};
  return json_response(200, body);
}

HttpResponse Gateway::post_topics(const HttpRequest& r) {
  const json body = parse_body(r);
  std::shared_ptr<const TopicConfig> config;
  try {
    config = std::make_shared<const TopicConfig>(TopicConfig::from_json(body));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::validation) throw;
    const auto field = field_of(e.what());
    return error_response(400, "validation", e.what(), field.empty() ? "topics" : field);
  } catch (const json::exception& e) {
    return error_response(400, "validation", e.what(), "topics");
  }

  const std::string id = submit_job("topics", [this, config](const std::string& job_id) {
    auto s = snapshot();
    JobConfig cfg = options_.job;
    cfg.out_dir = options_.data_dir / "jobs" / job_id;
    cfg.topic_model.reset();
    ParseResult current;
    current.corpus = *s->corpus;
    Pipeline p(cfg);
    p.set_corpus(std::move(current));
    p.set_knowledge_base(kb_);
    p.set_override_store(overrides_);
    p.set_topic_config(config);
    {
      std::lock_guard lock(model_mu_);
      p.set_bot_model(bot_model_);
    }
    auto next = p.run();
    {
      std::lock_guard lock(model_mu_);
      topic_config_ = config;
      topic_model_ = p.topic_model();
    }
    publish(next.get());
    return json{{"config_hash", config->hash()},
                {"validation_accuracy", p.topic_model()->validation_accuracy}};
  });
  return json_response(202, {{"job_id", id},
                             {"status_url", "/jobs/" + id},
                             {"config_hash", config->hash()}});
}

HttpResponse Gateway::get_source_category(const std::string& id) {
  auto s = snapshot();
  auto it = s->categories.find(id);
  if (it == s->categories.end()) throw not_found_error("unknown source: " + id);
  json body = to_json(it->second);
  body["source_id"] = id;
  if (auto rec = overrides_->find(id)) body["ts"] = rec->ts;
  return json_response(200, body);
}

HttpResponse Gateway::patch_source_category(const std::string& id, const HttpRequest& r) {
  const json body = parse_body(r);
  const auto name = body_string(body, "category");
  auto category = parse_category(name);
  if (!category) {
    throw validation_error("category: expected news_media, political or citizen");
  }
  auto s = snapshot();
  SourceCategory applied = overrides_->apply(*s->corpus, id, *category);
  publish(nullptr);
  json out = to_json(applied);
  out["source_id"] = id;
  if (auto rec = overrides_->find(id)) out["ts"] = rec->ts;
  return json_response(200, out);
}

HttpResponse Gateway::post_message(const std::string& room, const HttpRequest& r) {
  const json body = parse_body(r);
  const auto msg = collab_->post_message(room, body_string(body, "author"),
                                         body_string(body, "text"));
  json out = to_json(msg);
  out["room_id"] = room;
  return json_response(201, out);
}

HttpResponse Gateway::get_messages(const std::string& room, const HttpRequest& r) {
  const auto after = query_uint(r, "after", 0);
  json arr = json::array();
  for (const auto& m : collab_->messages(room, after)) arr.push_back(to_json(m));
  return json_response(200, {{"room_id", room}, {"messages", arr}});
}

HttpResponse Gateway::get_events(const std::string& room, const HttpRequest& r) {
  const auto after = query_uint(r, "after", 0);
  auto timeout = std::chrono::milliseconds(
      query_uint(r, "timeout_ms", static_cast<std::uint64_t>(options_.max_long_poll.count())));
  timeout = std::min(timeout, options_.max_long_poll);
  const auto msgs = collab_->wait_for_messages(room, after, timeout);
  json arr = json::array();
  for (const auto& m : msgs) arr.push_back(to_json(m));
  const std::uint64_t next = msgs.empty() ? after : msgs.back().seq;
  return json_response(200, {{"room_id", room},
                             {"messages", arr},
                             {"next_after", next},
                             {"draft", to_json(collab_->draft(room))}});
}

HttpResponse Gateway::get_room(const std::string& room) {
  const auto msgs = collab_->messages(room);
  return json_response(200, {{"room_id", room},
                             {"members", collab_->members(room)},
                             {"message_count", msgs.size()},
                             {"draft", to_json(collab_->draft(room))}});
}

HttpResponse Gateway::get_draft(const std::string& room) {
  json out = to_json(collab_->draft(room));
  out["room_id"] = room;
  return json_response(200, out);
}

HttpResponse Gateway::put_draft(const std::string& room, const HttpRequest& r) {
  const json body = parse_body(r);
  if (!body.contains("base_version") || !body["base_version"].is_number_unsigned()) {
    throw validation_error("base_version: expected a non-negative integer");
  }
  const auto base = body["base_version"].get<std::uint64_t>();
  const auto text = body_string(body, "text");
  const auto author = body_string(body, "author", false);
  const auto result = collab_->update_draft(room, base, text, author);
  if (result.accepted) {
    return json_response(200, {{"room_id", room},
                               {"accepted", true},
                               {"draft", to_json(result.draft)}});
  }
  return json_response(409, {{"room_id", room},
                             {"accepted", false},
                             {"conflict", true},
                             {"base_version", base},
                             {"draft", to_json(result.draft)}});
}

HttpResponse Gateway::post_translate(const HttpRequest& r) {
  const json body = parse_body(r);
  const auto text = body_string(body, "text");
  const auto target = body_string(body, "target");
  const auto t = options_.translator->translate(text, target);
  return json_response(200, {{"text", t.text},
                             {"target", t.target_language},
                             {"provider", t.provider},
                             {"translated", t.translated}});
}

}  // namespace datavoid
