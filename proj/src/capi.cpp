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

#include "datavoid/datavoid.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "datavoid/error.hpp"
#include "datavoid/gateway.hpp"
#include "datavoid/metrics.hpp"
#include "datavoid/pipeline.hpp"
#include "datavoid/server.hpp"

using nlohmann::json;

struct dv_pipeline {
  std::unique_ptr<datavoid::Pipeline> pipeline;
};

struct dv_service {
  std::unique_ptr<datavoid::Gateway> gateway;
  std::unique_ptr<datavoid::HttpServer> server;
};

namespace {

thread_local std::string last_error;

dv_status fail(dv_status status, const std::string& message) {
  last_error = message;
  return status;
}

dv_status status_of(datavoid::ErrorCode code) {
  switch (code) {
    case datavoid::ErrorCode::validation:
      return DV_ERR_VALIDATION;
    case datavoid::ErrorCode::not_found:
      return DV_ERR_NOT_FOUND;
    case datavoid::ErrorCode::conflict:
      return DV_ERR_CONFLICT;
    case datavoid::ErrorCode::fatal:
      break;
  }
  return DV_ERR_FATAL;
}

template <class F>
dv_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return DV_OK;
  } catch (const datavoid::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail(DV_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(DV_ERR_FATAL, e.what());
  } catch (...) {
    return fail(DV_ERR_FATAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const json& j) {
  if (out) *out = dup(j.dump());
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 &&
               hex_value(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    const auto pair = q.substr(0, amp);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      if (eq == std::string_view::npos) {
        out[percent_decode(pair)] = "";
      } else {
        out[percent_decode(pair.substr(0, eq))] = percent_decode(pair.substr(eq + 1));
      }
    }
    if (amp == std::string_view::npos) break;
    q.remove_prefix(amp + 1);
  }
  return out;
}

json train_report(datavoid::Pipeline& p) {
  json report = {{"topic_model",
                  {{"validation_accuracy", p.topic_model()->validation_accuracy},
                   {"train_size", p.topic_model()->meta.train_size},
                   {"validation_size", p.topic_model()->meta.validation_size}}}};
  std::ifstream bot(p.config().out_dir / "bot_metrics.json");
  if (bot) {
    json j = json::parse(bot, nullptr, false);
    if (!j.is_discarded()) report["bot_model"] = j;
  }
  return report;
}

}  // namespace

extern "C" {

const char* dv_version(void) { return "1.0.0"; }

const char* dv_last_error(void) { return last_error.c_str(); }

const char* dv_status_name(dv_status status) {
  switch (status) {
    case DV_OK:
      return "ok";
    case DV_ERR_VALIDATION:
      return "validation";
    case DV_ERR_FATAL:
      return "fatal";
    case DV_ERR_NOT_FOUND:
      return "not_found";
    case DV_ERR_CONFLICT:
      return "conflict";
    case DV_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
  }
  return "unknown";
}

void dv_string_free(char* s) { std::free(s); }

dv_status dv_pipeline_create(const char* config_json, const char* base_dir,
                             dv_pipeline** out) {
  if (!config_json || !out) return fail(DV_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    json j = json::parse(config_json);
    auto cfg = datavoid::job_config_from_json(j, base_dir ? base_dir : "");
    *out = new dv_pipeline{std::make_unique<datavoid::Pipeline>(std::move(cfg))};
  });
}

dv_status dv_pipeline_create_for_corpus(const char* corpus_dir, const char* topics_path,
                                        const char* out_dir, const char* options_json,
                                        dv_pipeline** out) {
  if (!corpus_dir || !topics_path || !out_dir || !out) {
    return fail(DV_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto cfg = datavoid::job_config_for_corpus_dir(corpus_dir, topics_path, out_dir);
    if (options_json && *options_json) {
      json patch = json::parse(options_json);
      if (!patch.is_object()) throw datavoid::validation_error("options: expected an object");
      json j = datavoid::to_json(cfg);
      j.merge_patch(patch);
      cfg = datavoid::job_config_from_json(j);
    }
    *out = new dv_pipeline{std::make_unique<datavoid::Pipeline>(std::move(cfg))};
  });
}

void dv_pipeline_free(dv_pipeline* p) { delete p; }

dv_status dv_pipeline_config(dv_pipeline* p, char** config_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] { put(config_json, datavoid::to_json(p->pipeline->config())); });
}

dv_status dv_pipeline_validate(dv_pipeline* p) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] { p->pipeline->config().validate(); });
}

dv_status dv_pipeline_ingest(dv_pipeline* p, char** report_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] {
    const auto r = p->pipeline->ingest();
    put(report_json, {{"accepted_posts", r.accepted},
                      {"rejected_posts", r.post_rejects},
                      {"rejected_sources", r.source_rejects},
                      {"warnings", r.warnings}});
  });
}

dv_status dv_pipeline_categorize(dv_pipeline* p, char** categories_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] {
    p->pipeline->categorize();
    if (!categories_json) return;
    json counts = {{"news_media", 0}, {"political", 0}, {"citizen", 0}};
    std::ifstream in(p->pipeline->config().out_dir / "source_categories.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      const json j = json::parse(line);
      counts[j.at("category").get<std::string>()] =
          counts[j.at("category").get<std::string>()].get<int>() + 1;
    }
    put(categories_json, {{"sources", p->pipeline->corpus().sources().size()},
                          {"categories", counts}});
  });
}

dv_status dv_pipeline_train(dv_pipeline* p, char** report_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] {
    p->pipeline->train();
    if (report_json) put(report_json, train_report(*p->pipeline));
  });
}

dv_status dv_pipeline_annotate(dv_pipeline* p, char** report_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] {
    p->pipeline->annotate();
    std::size_t bots = 0;
    for (const auto& a : p->pipeline->annotated()) bots += a.bot.is_bot ? 1 : 0;
    put(report_json, {{"annotated_posts", p->pipeline->annotated().size()},
                      {"bot_posts", bots}});
  });
}

dv_status dv_pipeline_report(dv_pipeline* p, char** summary_json) {
  if (!p) return fail(DV_ERR_INVALID_ARGUMENT, "null pipeline");
  return guarded([&] {
    p->pipeline->report();
    if (!summary_json) return;
    std::ifstream in(p->pipeline->config().out_dir / "summary.json");
    put(summary_json, json::parse(in));
  });
}

dv_status dv_compute_metrics(uint64_t tp, uint64_t fp, uint64_t fn, uint64_t tn,
                             char** metrics_json) {
  return guarded([&] {
    const datavoid::ConfusionMatrix cm{tp, fp, fn, tn};
    json j = datavoid::to_json(datavoid::compute_metrics(cm));
    j["confusion"] = datavoid::to_json(cm);
    put(metrics_json, j);
  });
}

dv_status dv_service_create(dv_pipeline* p, dv_service** out) {
  if (!p || !out) return fail(DV_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto options = datavoid::gateway_options_from_env(p->pipeline->config());
    auto svc = std::make_unique<dv_service>();
    svc->gateway = std::make_unique<datavoid::Gateway>(std::move(options));
    *out = svc.release();
  });
}

void dv_service_free(dv_service* s) {
  if (!s) return;
  s->server.reset();
  delete s;
}

dv_status dv_service_handle(dv_service* s, const char* method, const char* path,
                            const char* query, const char* body, int* http_status,
                            char** response_body) {
  if (!s || !method || !path) return fail(DV_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    datavoid::HttpRequest r;
    r.method = method;
    r.path = percent_decode(path);
    if (query) r.query = parse_query(query);
    if (body) r.body = body;
    const auto resp = s->gateway->handle(r);
    if (http_status) *http_status = resp.status;
    if (response_body) *response_body = dup(resp.body);
  });
}

dv_status dv_service_start(dv_service* s, const char* host, int port, int* bound_port) {
  if (!s || !host) return fail(DV_ERR_INVALID_ARGUMENT, "null argument");
  if (s->server) return fail(DV_ERR_CONFLICT, "service already started");
  return guarded([&] {
    auto server = std::make_unique<datavoid::HttpServer>(*s->gateway);
    const int p = server->start(host, port);
    s->server = std::move(server);
    if (bound_port) *bound_port = p;
  });
}

dv_status dv_service_wait(dv_service* s) {
  if (!s) return fail(DV_ERR_INVALID_ARGUMENT, "null service");
  return guarded([&] {
    if (s->server) s->server->wait();
  });
}

dv_status dv_service_stop(dv_service* s) {
  if (!s) return fail(DV_ERR_INVALID_ARGUMENT, "null service");
  return guarded([&] {
    if (s->server) s->server->stop();
  });
}

}  // extern "C"
