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

#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "datavoid/collab.hpp"
#include "datavoid/error.hpp"
#include "support.hpp"

using namespace datavoid;
using namespace std::chrono_literals;

namespace {

void check_dense(const std::vector<ChatMessage>& log) {
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i].seq == i + 1);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::fatal;
}

}  // namespace

TEST_CASE("a message to a new room gets seq 1") {
  CollabStore store;
  const auto m = store.post_message("newsroom", "ana", "hello");
  CHECK(m.seq == 1);
  CHECK(store.rooms() == std::vector<std::string>{"newsroom"});
  CHECK(store.members("newsroom") == std::set<std::string>{"ana"});
  CHECK(store.post_message("newsroom", "ben", "hi").seq == 2);
  CHECK(store.messages("newsroom", 1).size() == 1);
  CHECK(store.messages("unknown").empty());
}

TEST_CASE("invalid messages are rejected") {
  CollabStore store;
  CHECK(code_of([&] { store.post_message("r", "ana", ""); }) == ErrorCode::validation);
  CHECK(code_of([&] { store.post_message("r", "", "x"); }) == ErrorCode::validation);
  CHECK(code_of([&] { store.post_message("bad room!", "a", "x"); }) == ErrorCode::validation);
  CHECK(valid_room_id("a-b_C9"));
  CHECK_FALSE(valid_room_id(""));
  CHECK_FALSE(valid_room_id(std::string(65, 'a')));
  CHECK_FALSE(valid_room_id("../etc"));
}

TEST_CASE("concurrent posters get dense sequence numbers") {
  CollabStore store;
  constexpr int kThreads = 8, kEach = 50;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < kEach; ++i) {
        store.post_message("r", "user" + std::to_string(t), std::to_string(i));
      }
    });
  }
  for (auto& th : threads) th.join();
  const auto log = store.messages("r");
  REQUIRE(log.size() == kThreads * kEach);
  check_dense(log);
}

TEST_CASE("draft compare-and-set") {
  CollabStore store;
  SUBCASE("base 0 on a fresh draft") {
    const auto u = store.update_draft("r", 0, "first");
    CHECK(u.accepted);
    CHECK(u.draft.version == 1);
  }
  SUBCASE("stale base is a conflict carrying the current draft") {
    store.update_draft("r", 0, "one");
    store.update_draft("r", 1, "two");
    const auto u = store.update_draft("r", 0, "late");
    CHECK_FALSE(u.accepted);
    CHECK(u.draft == Draft{"two", 2});
  }
  SUBCASE("sequential edits") {
    store.update_draft("r", 0, "a");
    store.update_draft("r", 1, "b");
    store.update_draft("r", 2, "c");
    CHECK(store.draft("r") == Draft{"c", 3});
  }
}

TEST_CASE("exactly one of two racing writers wins") {
  for (int trial = 0; trial < 100; ++trial) {
    CollabStore store;
    std::atomic<int> ready{0};
    DraftUpdate results[2];
    std::thread writers[2];
    for (int w = 0; w < 2; ++w) {
      writers[w] = std::thread([&, w] {
        ++ready;
        while (ready.load() < 2) {
        }
        results[w] = store.update_draft("r", 0, "writer" + std::to_string(w));
      });
    }
    for (auto& t : writers) t.join();
    CHECK(results[0].accepted != results[1].accepted);
    CHECK(store.draft("r").version == 1);
  }
}

TEST_CASE("long-poll wakes on a new message") {
  CollabStore store;
  store.post_message("r", "a", "one");
  std::thread poster([&] {
    std::this_thread::sleep_for(50ms);
    store.post_message("r", "b", "two");
  });
  const auto start = std::chrono::steady_clock::now();
  const auto got = store.wait_for_messages("r", 1, 5000ms);
  poster.join();
  REQUIRE(got.size() == 1);
  CHECK(got[0].text == "two");
  CHECK(std::chrono::steady_clock::now() - start < 4000ms);
  CHECK(store.wait_for_messages("r", 2, 20ms).empty());
}

TEST_CASE("replay after restart reproduces the log") {
  dvtest::TempDir dir;
  std::vector<ChatMessage> before;
  {
    CollabStore store(dir.path(), 7);  // snapshots every 7 events
    for (int i = 0; i < 23; ++i) store.post_message("r", "a" + std::to_string(i % 3), "m" + std::to_string(i));
    store.update_draft("r", 0, "draft one");
    store.update_draft("r", 1, "draft two");
    store.post_message("other", "z", "elsewhere");
    before = store.messages("r");
  }
  CHECK(std::filesystem::exists(dir / "r.snapshot.json"));
  CollabStore reloaded(dir.path(), 7);
  CHECK(reloaded.messages("r") == before);
  check_dense(reloaded.messages("r"));
  CHECK(reloaded.draft("r") == Draft{"draft two", 2});
  CHECK(reloaded.members("r").size() == 3);
  CHECK(reloaded.messages("other").size() == 1);
  // Numbering continues without a gap.
  CHECK(reloaded.post_message("r", "a", "after").seq == 24);
}

TEST_CASE("a torn final line is ignored, earlier corruption is fatal") {
  dvtest::TempDir dir;
  {
    CollabStore store(dir.path());
    store.post_message("r", "a", "one");
    store.post_message("r", "a", "two");
  }
  {
    std::ofstream out(dir / "r.events.jsonl", std::ios::app);
    out << "{\"type\":\"message\",\"seq\":3,\"au";
  }
  {
    CollabStore store(dir.path());
    CHECK(store.messages("r").size() == 2);
    CHECK(store.post_message("r", "a", "three").seq == 3);
  }
  {
    CollabStore store(dir.path());
    CHECK(store.messages("r").size() == 3);
  }
  dvtest::write_file(dir / "r.events.jsonl", "garbage\n{\"type\":\"message\"}\n");
  std::filesystem::remove(dir / "r.snapshot.json");
  CHECK(code_of([&] { CollabStore store(dir.path()); }) == ErrorCode::fatal);
}
