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

// Command-line front end. Talks to the library only through the C API.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "datavoid/datavoid.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitFatal = 2;

struct Options {
  std::string corpus;
  std::string config;
  std::string topics = "topics.json";
  std::string out = "out";
  std::string kb;
  std::optional<double> alpha;
  std::optional<double> tau;
  std::optional<double> tau_c;
  std::optional<double> epsilon;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string host = "127.0.0.1";
  int port = 8080;
};

int exit_code(dv_status s) {
  if (s == DV_OK) return kExitOk;
  return s == DV_ERR_FATAL ? kExitFatal : kExitValidation;
}

int report_failure(dv_status s) {
  std::cerr << "error (" << dv_status_name(s) << "): " << dv_last_error() << '\n';
  return exit_code(s);
}

void print_and_free(char* s) {
  if (!s) return;
  std::cout << s << '\n';
  dv_string_free(s);
}

// Builds the pipeline from --config or --corpus plus flag overrides.
dv_status make_pipeline(const Options& o, dv_pipeline** out) {
  nlohmann::json opts = nlohmann::json::object();
  if (!o.kb.empty()) opts["kb_dir"] = o.kb;
  if (o.alpha) opts["thresholds"]["alpha"] = *o.alpha;
  if (o.tau) opts["thresholds"]["tau"] = *o.tau;
  if (o.tau_c) opts["thresholds"]["tau_c"] = *o.tau_c;
  if (o.epsilon) opts["epsilon"] = *o.epsilon;
  if (o.k) opts["k"] = *o.k;
  if (o.seed) {
    opts["topic_seed"] = *o.seed;
    opts["bot_seed"] = *o.seed;
  }
  if (o.strict) opts["strict"] = true;

  if (!o.config.empty()) {
    std::FILE* f = std::fopen(o.config.c_str(), "rb");
    if (!f) {
      std::fprintf(stderr, "error (validation): config: cannot read %s\n", o.config.c_str());
      return DV_ERR_VALIDATION;
    }
    std::string text;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) text.append(buf, n);
    std::fclose(f);
    nlohmann::json cfg = nlohmann::json::parse(text, nullptr, false);
    if (cfg.is_discarded()) {
      std::fprintf(stderr, "error (validation): config: malformed JSON\n");
      return DV_ERR_VALIDATION;
    }
    cfg.merge_patch(opts);
    const auto slash = o.config.find_last_of('/');
    const std::string base = slash == std::string::npos ? "" : o.config.substr(0, slash);
    return dv_pipeline_create(cfg.dump().c_str(), base.c_str(), out);
  }
  if (o.corpus.empty()) {
    std::fprintf(stderr, "error (validation): one of --corpus or --config is required\n");
    return DV_ERR_VALIDATION;
  }
  return dv_pipeline_create_for_corpus(o.corpus.c_str(), o.topics.c_str(), o.out.c_str(),
                                       opts.dump().c_str(), out);
}

int run_stage(const std::string& stage, const Options& o) {
  dv_pipeline* p = nullptr;
  dv_status s = make_pipeline(o, &p);
  if (s != DV_OK) {
    return dv_last_error()[0] ? report_failure(s) : exit_code(s);
  }
  if (stage != "ingest" && stage != "categorize") s = dv_pipeline_validate(p);
  char* out = nullptr;
  if (s == DV_OK) {
    if (stage == "ingest") s = dv_pipeline_ingest(p, &out);
    else if (stage == "categorize") s = dv_pipeline_categorize(p, &out);
    else if (stage == "train") s = dv_pipeline_train(p, &out);
    else if (stage == "annotate") s = dv_pipeline_annotate(p, &out);
    else s = dv_pipeline_report(p, nullptr);
  }
  if (s == DV_OK && stage == "report") {
    std::cout << "wrote " << o.out << "/summary.json and " << o.out << "/void_report.json\n";
  }
  print_and_free(out);
  const int code = s == DV_OK ? kExitOk : report_failure(s);
  dv_pipeline_free(p);
  return code;
}

int run_serve(const Options& o) {
  // Block termination signals before any thread starts so sigwait below
  // receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  dv_pipeline* p = nullptr;
  dv_status s = make_pipeline(o, &p);
  if (s != DV_OK) return dv_last_error()[0] ? report_failure(s) : exit_code(s);
  if ((s = dv_pipeline_validate(p)) != DV_OK) {
    const int code = report_failure(s);
    dv_pipeline_free(p);
    return code;
  }
  dv_service* svc = nullptr;
  s = dv_service_create(p, &svc);
  dv_pipeline_free(p);
  if (s != DV_OK) return report_failure(s);

  int port = 0;
  if ((s = dv_service_start(svc, o.host.c_str(), o.port, &port)) != DV_OK) {
    const int code = report_failure(s);
    dv_service_free(svc);
    return code;
  }
  std::cout << "listening on http://" << o.host << ":" << port << std::endl;

  int sig = 0;
  sigwait(&signals, &sig);
  dv_service_stop(svc);
  dv_service_free(svc);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data void analysis over social-media post corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dv_version());
  Options o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus,
                    "Corpus directory: posts.jsonl, sources.jsonl, kb/, bot_labels.jsonl");
    cmd->add_option("--config", o.config, "Job config JSON (instead of --corpus)");
    cmd->add_option("--topics", o.topics, "Topic keyword file")->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--kb", o.kb, "Knowledge base directory (default: <corpus>/kb)");
    cmd->add_option("--alpha", o.alpha, "Topic void factor of the median topic count");
    cmd->add_option("--tau", o.tau, "Leaning void threshold, percent");
    cmd->add_option("--tau-c", o.tau_c, "Source-type void threshold, percent");
    cmd->add_option("--epsilon", o.epsilon, "Neutral band half-width for leaning labels");
    cmd->add_option("-k,--top-k", o.k, "Frequent sources listed per topic");
    cmd->add_option("--seed", o.seed, "Seed for sampling and training");
    cmd->add_flag("--strict", o.strict, "Fail when any input line is rejected");
  };

  const std::pair<const char*, const char*> stages[] = {
      {"ingest", "Parse and validate the corpus"},
      {"categorize", "Categorize sources"},
      {"train", "Weak-label topics and train the topic and bot models"},
      {"annotate", "Annotate every post"},
      {"report", "Write summary.json and void_report.json"}};
  for (const auto& [name, help] : stages) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd);
  }
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  add_common(serve);
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();
  serve->add_option("--port", o.port, "Port; 0 picks a free one")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }
  const std::string chosen = app.get_subcommands().front()->get_name();
  return chosen == "serve" ? run_serve(o) : run_stage(chosen, o);
}
