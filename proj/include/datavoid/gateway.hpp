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
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "datavoid/clients.hpp"
#include "datavoid/collab.hpp"
#include "datavoid/pipeline.hpp"

namespace datavoid {

struct HttpRequest {
  std::string method;
  std::string path;  // already percent-decoded
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

enum class JobState { queued, running, succeeded, failed };
std::string_view to_string(JobState s) noexcept;

struct JobStatus {
  std::string id;
  std::string kind;  // "corpus" or "topics"
  JobState state = JobState::queued;
  std::string submitted_at;
  std::string finished_at;
  std::string error;
  nlohmann::json result;
};

struct GatewayOptions {
  // Base inputs: knowledge base, page map, thresholds, seeds. Uploaded
  // corpora replace posts and sources only.
  JobConfig job;
  // Rooms, job outputs and override sidecar live here.
  std::filesystem::path data_dir;
  std::optional<std::string> api_token;
  std::chrono::milliseconds max_long_poll{25000};
  std::shared_ptr<const Translator> translator;
};

// Resolves the service's options from a job config plus the environment:
// DATAVOID_DATA_DIR (default: <out_dir>/data) and DATAVOID_API_TOKEN.
GatewayOptions gateway_options_from_env(JobConfig job);

// Transport-independent request router. Reads go against an immutable
// snapshot that is swapped whole; writes are serialized per entity.
class Gateway {
 public:
  // Runs the full pipeline to build the first snapshot.
  explicit Gateway(GatewayOptions options);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  HttpResponse handle(const HttpRequest& request);

  std::shared_ptr<const AnalysisSnapshot> snapshot() const;
  std::optional<JobStatus> job(const std::string& id) const;
  // Blocks until no job is queued or running.
  void wait_idle();

  CollabStore& collab() noexcept { return *collab_; }

 private:
  HttpResponse dispatch(const HttpRequest& request);

  HttpResponse get_health();
  HttpResponse get_summary(const HttpRequest& request);
  HttpResponse get_topic_posts(const std::string& topic, const HttpRequest& request);
  HttpResponse get_voids(const HttpRequest& request);
  HttpResponse post_corpus(const HttpRequest& request);
  HttpResponse get_job(const std::string& id);
  HttpResponse post_topics(const HttpRequest& request);
  HttpResponse get_source_category(const std::string& id);
  HttpResponse patch_source_category(const std::string& id, const HttpRequest& request);
  HttpResponse post_message(const std::string& room, const HttpRequest& request);
  HttpResponse get_messages(const std::string& room, const HttpRequest& request);
  HttpResponse get_events(const std::string& room, const HttpRequest& request);
  HttpResponse get_room(const std::string& room);
  HttpResponse get_draft(const std::string& room);
  HttpResponse put_draft(const std::string& room, const HttpRequest& request);
  HttpResponse post_translate(const HttpRequest& request);

  // Reapplies every stored override to `next` (the current snapshot when
  // null) and swaps the result in.
  void publish(const AnalysisSnapshot* next);
  std::string submit_job(std::string kind,
                         std::function<nlohmann::json(const std::string& id)> work);

  GatewayOptions options_;
  std::shared_ptr<const KnowledgeBase> kb_;
  std::shared_ptr<OverrideStore> overrides_;
  std::unique_ptr<CollabStore> collab_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const AnalysisSnapshot> snapshot_;

  // Guarded by model_mu_; replaced together when topics change.
  mutable std::mutex model_mu_;
  std::shared_ptr<const TopicConfig> topic_config_;
  std::shared_ptr<const TopicModel> topic_model_;
  std::shared_ptr<const BotModel> bot_model_;

  // Serializes snapshot publication (jobs and overrides).
  std::mutex write_mu_;
  // Jobs run one at a time, in submission order of lock acquisition.
  std::mutex job_run_mu_;

  mutable std::mutex jobs_mu_;
  std::condition_variable jobs_cv_;
  std::map<std::string, JobStatus> jobs_;
  std::vector<std::thread> workers_;
  std::uint64_t next_job_ = 1;
  std::size_t active_jobs_ = 0;
};

}  // namespace datavoid
