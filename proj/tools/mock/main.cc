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

// Serves the deterministic mock backend on a fixed port for manual runs
// against the remote components.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risklens/label.h"
#include "risklens/mock_server.h"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic mock model backend", "risklens-mock"};
  risklens::MockServerOptions options;
  std::string chat_label;
  int64_t latency_ms = 0;
  app.add_option("--host", options.host, "Bind address");
  app.add_option("--port", options.port, "Port (0 picks a free one)");
  app.add_option("--embed-dim", options.embed_dim, "Embedding width");
  app.add_option("--chat-label", chat_label, "Fixed label for every chat reply");
  app.add_option("--garbage-marker", options.chat_garbage_markers,
                 "Posts containing this get an unparseable chat reply");
  app.add_option("--fail-first", options.fail_first_n, "Fail the first N POST requests");
  app.add_option("--latency-ms", latency_ms, "Delay added to every POST");
  CLI11_PARSE(app, argc, argv);

  if (!chat_label.empty()) {
    options.chat_label = risklens::ParseLabel(chat_label);
    if (!options.chat_label) {
      std::cerr << "error: unknown label '" << chat_label << "'\n";
      return 1;
    }
  }
  options.latency = std::chrono::milliseconds(latency_ms);
  risklens::MockModelServer server(options);
  server.Start();
  std::cout << server.base_url() << std::endl;
  server.Wait();
  return 0;
}
