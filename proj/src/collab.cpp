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

#include "datavoid/collab.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string_view>

#include "datavoid/corpus.hpp"
#include "datavoid/error.hpp"
#include "datavoid/text.hpp"

namespace datavoid {

using nlohmann::json;
namespace fs = std::filesystem;

struct CollabStore::Room {
  std::string id;
  mutable std::mutex mu;
  std::condition_variable cv;
  std::vector<ChatMessage> log;
  Draft draft;
  std::set<std::string> members;
  std::size_t event_count = 0;
  std::ofstream events;
};

namespace {

std::string now_rfc3339() {
  return format_timestamp(
      std::chrono::time_point_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now()));
}

fs::path events_path(const fs::path& dir, const std::string& id) {
  return dir / (id + ".events.jsonl");
}

fs::path snapshot_path(const fs::path& dir, const std::string& id) {
  return dir / (id + ".snapshot.json");
}

}  // namespace

json to_json(const ChatMessage& m) {
  return {{"seq", m.seq}, {"author", m.author}, {"text", m.text}, {"ts", m.ts}};
}

json to_json(const Draft& d) { return {{"text", d.text}, {"version", d.version}}; }

bool valid_room_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

CollabStore::CollabStore() = default;

CollabStore::CollabStore(fs::path dir, std::size_t snapshot_every)
    : dir_(std::move(dir)), snapshot_every_(std::max<std::size_t>(1, snapshot_every)) {
  std::error_code ec;
  fs::create_directories(*dir_, ec);
  if (ec) throw fatal_error("cannot create room directory " + dir_->string());
  load_rooms();
}

CollabStore::~CollabStore() = default;

void CollabStore::apply_event(Room& r, const json& e) {
  const auto type = e.at("type").get<std::string>();
  if (type == "message") {
    ChatMessage m{e.at("seq").get<std::uint64_t>(), e.at("author").get<std::string>(),
                  e.at("text").get<std::string>(), e.at("ts").get<std::string>()};
    if (m.seq != r.log.size() + 1) {
      throw fatal_error("room " + r.id + ": sequence gap at " + std::to_string(m.seq));
    }
    r.members.insert(m.author);
    r.log.push_back(std::move(m));
  } else if (type == "draft") {
    const auto version = e.at("version").get<std::uint64_t>();
    if (version != r.draft.version + 1) {
      throw fatal_error("room " + r.id + ": draft version gap at " +
                        std::to_string(version));
    }
    r.draft = {e.at("text").get<std::string>(), version};
    const auto author = e.value("author", std::string());
    if (!author.empty()) r.members.insert(author);
  } else {
    throw fatal_error("room " + r.id + ": unknown event type " + type);
  }
  ++r.event_count;
}

void CollabStore::load_rooms() {
  for (const auto& entry : fs::directory_iterator(*dir_)) {
    const auto name = entry.path().filename().string();
    const std::string suffix = ".events.jsonl";
    if (name.size() <= suffix.size() ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    const auto id = name.substr(0, name.size() - suffix.size());
    if (!valid_room_id(id)) continue;

    auto r = std::make_unique<Room>();
    r->id = id;
    std::size_t skip = 0;
    if (std::ifstream snap(snapshot_path(*dir_, id)); snap) {
      json s = json::parse(snap, nullptr, false);
      if (!s.is_discarded()) {
        for (const auto& m : s.at("messages")) {
          r->log.push_back({m.at("seq").get<std::uint64_t>(),
                            m.at("author").get<std::string>(),
                            m.at("text").get<std::string>(),
                            m.at("ts").get<std::string>()});
        }
        r->draft = {s.at("draft").at("text").get<std::string>(),
                    s.at("draft").at("version").get<std::uint64_t>()};
        r->members = s.at("members").get<std::set<std::string>>();
        skip = s.at("event_count").get<std::size_t>();
        r->event_count = skip;
      }
    }

    std::string content;
    {
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      content = buf.str();
    }
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
      const auto nl = content.find('\n', pos);
      const bool last = nl == std::string::npos || nl + 1 == content.size();
      const auto line = std::string_view(content).substr(
          pos, nl == std::string::npos ? std::string::npos : nl - pos);
      const auto start = pos;
      pos = nl == std::string::npos ? content.size() : nl + 1;
      if (line.empty()) continue;
      json e = json::parse(line, nullptr, false);
      if (e.is_discarded() || nl == std::string::npos) {
        // A torn final line is an interrupted write; cut it off so later
        // appends start on a clean line. Anything earlier is corruption.
        if (!last) {
          throw fatal_error("room " + id + ": corrupt event log line " +
                            std::to_string(n + 1));
        }
        fs::resize_file(entry.path(), start);
        break;
      }
      if (++n <= skip) continue;
      apply_event(*r, e);
    }
    if (n < skip) throw fatal_error("room " + id + ": snapshot ahead of event log");
    rooms_.emplace(id, std::move(r));
  }
}

CollabStore::Room& CollabStore::room(const std::string& id) {
  if (!valid_room_id(id)) throw validation_error("invalid room_id");
  {
    std::shared_lock lock(rooms_mu_);
    if (auto it = rooms_.find(id); it != rooms_.end()) return *it->second;
  }
  std::unique_lock lock(rooms_mu_);
  auto& slot = rooms_[id];
  if (!slot) {
    slot = std::make_unique<Room>();
    slot->id = id;
  }
  return *slot;
}

const CollabStore::Room* CollabStore::find_room(const std::string& id) const {
  std::shared_lock lock(rooms_mu_);
  auto it = rooms_.find(id);
  return it == rooms_.end() ? nullptr : it->second.get();
}

// Caller holds r.mu.
void CollabStore::record(Room& r, const json& event) {
  if (!dir_) {
    ++r.event_count;
    return;
  }
  if (!r.events.is_open()) {
    r.events.open(events_path(*dir_, r.id), std::ios::app);
    if (!r.events) throw fatal_error("cannot open event log for room " + r.id);
  }
  r.events << event.dump() << '\n';
  r.events.flush();
  if (!r.events) throw fatal_error("cannot append to event log for room " + r.id);
  ++r.event_count;
}

// Caller holds r.mu and has applied the last recorded event.
void CollabStore::maybe_snapshot(Room& r) {
  if (!dir_ || r.event_count % snapshot_every_ != 0) return;
  json messages = json::array();
  for (const auto& m : r.log) messages.push_back(to_json(m));
  json snap = {{"event_count", r.event_count},
               {"messages", messages},
               {"draft", to_json(r.draft)},
               {"members", r.members}};
  const auto target = snapshot_path(*dir_, r.id);
  const auto tmp = fs::path(target.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << snap.dump();
    if (!out) throw fatal_error("cannot write snapshot for room " + r.id);
  }
  fs::rename(tmp, target);
}

ChatMessage CollabStore::post_message(const std::string& room_id,
                                      const std::string& author,
                                      const std::string& text) {
  if (text::trim(author).empty()) throw validation_error("author: must not be empty");
  if (text::trim(text).empty()) throw validation_error("text: must not be empty");
  Room& r = room(room_id);
  std::lock_guard lock(r.mu);
  ChatMessage m{r.log.size() + 1, author, text, now_rfc3339()};
  record(r, {{"type", "message"},
             {"seq", m.seq},
             {"author", m.author},
             {"text", m.text},
             {"ts", m.ts}});
  r.members.insert(author);
  r.log.push_back(m);
  maybe_snapshot(r);
  r.cv.notify_all();
  return m;
}

std::vector<ChatMessage> CollabStore::messages(const std::string& room_id,
                                               std::uint64_t after) const {
  const Room* r = find_room(room_id);
  if (!r) return {};
  std::lock_guard lock(r->mu);
  if (after >= r->log.size()) return {};
  return {r->log.begin() + static_cast<std::ptrdiff_t>(after), r->log.end()};
}

std::vector<ChatMessage> CollabStore::wait_for_messages(
    const std::string& room_id, std::uint64_t after,
    std::chrono::milliseconds timeout) {
  Room& r = room(room_id);
  std::unique_lock lock(r.mu);
  r.cv.wait_for(lock, timeout, [&] { return r.log.size() > after; });
  if (after >= r.log.size()) return {};
  return {r.log.begin() + static_cast<std::ptrdiff_t>(after), r.log.end()};
}

Draft CollabStore::draft(const std::string& room_id) const {
  const Room* r = find_room(room_id);
  if (!r) return {};
  std::lock_guard lock(r->mu);
  return r->draft;
}

DraftUpdate CollabStore::update_draft(const std::string& room_id,
                                      std::uint64_t base_version,
                                      const std::string& text,
                                      const std::string& author) {
  Room& r = room(room_id);
  std::lock_guard lock(r.mu);
  if (base_version != r.draft.version) return {false, r.draft};
  Draft next{text, r.draft.version + 1};
  record(r, {{"type", "draft"},
             {"version", next.version},
             {"text", next.text},
             {"author", author},
             {"ts", now_rfc3339()}});
  if (!author.empty()) r.members.insert(author);
  r.draft = next;
  maybe_snapshot(r);
  return {true, next};
}

std::set<std::string> CollabStore::members(const std::string& room_id) const {
  const Room* r = find_room(room_id);
  if (!r) return {};
  std::lock_guard lock(r->mu);
  return r->members;
}

std::vector<std::string> CollabStore::rooms() const {
  std::shared_lock lock(rooms_mu_);
  std::vector<std::string> out;
  for (const auto& [id, r] : rooms_) out.push_back(id);
  return out;
}

}  // namespace datavoid
