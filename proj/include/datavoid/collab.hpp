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
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace datavoid {

struct ChatMessage {
  std::uint64_t seq = 0;  // dense per room, starting at 1
  std::string author;
  std::string text;
  std::string ts;  // RFC 3339
  bool operator==(const ChatMessage&) const = default;
};

struct Draft {
  std::string text;
  std::uint64_t version = 0;
  bool operator==(const Draft&) const = default;
};

// accepted == false means a compare-and-set conflict; `draft` then holds the
// current text and version for the client to merge against.
struct DraftUpdate {
  bool accepted = false;
  Draft draft;
};

nlohmann::json to_json(const ChatMessage& m);
nlohmann::json to_json(const Draft& d);

// [A-Za-z0-9_-]{1,64}
bool valid_room_id(std::string_view room_id) noexcept;

// Chat rooms and shared drafts. Rooms are created on first use. Every write
// is serialized per room and, when a directory is given, appended to
// <dir>/<room>.events.jsonl before it becomes visible; a snapshot file is
// rewritten every `snapshot_every` events so replay can skip the prefix.
class CollabStore {
 public:
  CollabStore();
  explicit CollabStore(std::filesystem::path dir, std::size_t snapshot_every = 256);
  ~CollabStore();

  CollabStore(const CollabStore&) = delete;
  CollabStore& operator=(const CollabStore&) = delete;

  // Throws validation on a bad room id or empty author/text.
  ChatMessage post_message(const std::string& room_id, const std::string& author,
                           const std::string& text);

  // Messages with seq > after, in order. Unknown rooms yield nothing.
  std::vector<ChatMessage> messages(const std::string& room_id,
                                    std::uint64_t after = 0) const;

  // Blocks until a message with seq > after exists or the timeout passes.
  std::vector<ChatMessage> wait_for_messages(const std::string& room_id,
                                             std::uint64_t after,
                                             std::chrono::milliseconds timeout);

  Draft draft(const std::string& room_id) const;
  DraftUpdate update_draft(const std::string& room_id, std::uint64_t base_version,
                           const std::string& text, const std::string& author = {});

  std::set<std::string> members(const std::string& room_id) const;
  std::vector<std::string> rooms() const;

 private:
  struct Room;
  Room& room(const std::string& room_id);
  const Room* find_room(const std::string& room_id) const;
  void load_rooms();
  void record(Room& r, const nlohmann::json& event);
  void maybe_snapshot(Room& r);
  void apply_event(Room& r, const nlohmann::json& event);

  std::optional<std::filesystem::path> dir_;
  std::size_t snapshot_every_ = 256;
  mutable std::shared_mutex rooms_mu_;
  std::map<std::string, std::unique_ptr<Room>> rooms_;
};

}  // namespace datavoid
