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

#include "datavoid/server.hpp"

#include <algorithm>
#include <cctype>

#include <httplib.h>

#include "datavoid/error.hpp"

namespace datavoid {

struct HttpServer::Impl {
  explicit Impl(Gateway& g) : gateway(g) {}
  Gateway& gateway;
  httplib::Server server;
};

namespace {

HttpRequest convert(const httplib::Request& req) {
  HttpRequest r;
  r.method = req.method;
  r.path = req.path;
  for (const auto& [k, v] : req.params) r.query.emplace(k, v);
  for (const auto& [k, v] : req.headers) {
    std::string name = k;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    r.headers.emplace(std::move(name), v);
  }
  r.body = req.body;
  return r;
}

}  // namespace

HttpServer::HttpServer(Gateway& gateway) : impl_(std::make_unique<Impl>(gateway)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse out = impl_->gateway.handle(convert(req));
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  auto& s = impl_->server;
  s.Get(R"(/.*)", handler);
  s.Post(R"(/.*)", handler);
  s.Put(R"(/.*)", handler);
  s.Patch(R"(/.*)", handler);
  s.Delete(R"(/.*)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  auto& s = impl_->server;
  if (port == 0) {
    port_ = s.bind_to_any_port(host);
  } else {
    port_ = s.bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) {
    throw fatal_error("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([&s] { s.listen_after_bind(); });
  // stop() is a no-op until the accept loop runs.
  s.wait_until_ready();
  return port_;
}

void HttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace datavoid
