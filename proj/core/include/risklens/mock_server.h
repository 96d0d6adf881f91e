// Copyright 2026 The risklens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKLENS_MOCK_SERVER_H_
#define RISKLENS_MOCK_SERVER_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/label.h"

namespace risklens {

// Deterministic stand-in for a model backend:
//   embed          signed hashed bag of tokens, embed_dim wide
//   generate       "<seed post> (<class> variant <seed>.<k>)", seed post
//                  chosen round-robin from the request seed
//   fit            class-frequency prior; id "mock-" + digest of the key
//   predict_proba  the stored prior for every text
//   chat           "Label: <Label>", fixed or chosen by hashing the user text
struct MockServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  size_t embed_dim = 32;
  std::optional<RiskLabel> chat_label;
  // User texts containing any of these get an unparseable chat reply.
  std::vector<std::string> chat_garbage_markers;
  // The first fail_first_n POST requests are answered with fail_status.
  int64_t fail_first_n = 0;
  int fail_status = 503;
  // The last embedding of every response is one element short.
  bool mismatched_embed_dims = false;
  // Required bearer token, if any.
  std::optional<std::string> auth_token;
  // Added to every POST handler.
  std::chrono::milliseconds latency{0};
};

struct MockServerStats {
  std::map<std::string, int64_t> requests;  // by path, failures included
  int64_t max_in_flight = 0;
};

class MockModelServer {
 public:
  explicit MockModelServer(MockServerOptions options = {});
  ~MockModelServer();
  MockModelServer(const MockModelServer&) = delete;
  MockModelServer& operator=(const MockModelServer&) = delete;

  // Binds and serves on a background thread; returns once ready.
  void Start();
  void Stop();
  // Blocks until Stop() is called from another thread.
  void Wait();

  int port() const;
  std::string base_url() const;
  MockServerStats stats() const;
  // Body of the most recent request to `path`, or null.
  nlohmann::json last_request(const std::string& path) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace risklens

#endif  // RISKLENS_MOCK_SERVER_H_
