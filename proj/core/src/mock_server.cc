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

#include "risklens/mock_server.h"

#include <atomic>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "risklens/error.h"
#include "risklens/features.h"
#include "risklens/fewshot.h"
#include "risklens/remote.h"

namespace risklens {
namespace {

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  Reply(res, status, {{"code", code}, {"message", message}});
}

// Thrown inside handlers to produce a {code, message} reply.
struct HandlerError {
  int status;
  std::string code;
  std::string message;
};

const nlohmann::json& Field(const nlohmann::json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end()) throw HandlerError{400, "invalid_request", fmt::format("missing field '{}'", name)};
  return *it;
}

std::vector<std::string> StringList(const nlohmann::json& body, const char* name) {
  const nlohmann::json& value = Field(body, name);
  if (!value.is_array()) throw HandlerError{400, "invalid_request", fmt::format("'{}' must be an array", name)};
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw HandlerError{400, "invalid_request", fmt::format("'{}' must hold strings", name)};
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

struct MockModelServer::Impl {
  MockServerOptions options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  bool running = false;

  mutable std::mutex mutex;
  std::map<std::string, int64_t> requests;
  std::map<std::string, nlohmann::json> last;
  std::map<std::string, std::array<double, kNumLabels>> models;
  std::atomic<int64_t> failures_left{0};
  std::atomic<int64_t> in_flight{0};
  std::atomic<int64_t> max_in_flight{0};

  nlohmann::json Embed(const nlohmann::json& body) {
    const auto texts = StringList(body, "texts");
    const size_t dim = options.embed_dim;
    nlohmann::json vectors = nlohmann::json::array();
    for (size_t t = 0; t < texts.size(); ++t) {
      std::vector<double> v(dim, 0.0);
      for (const std::string& token : Tokenize(texts[t])) {
        const uint64_t h = Fnv1a(token);
        v[h % dim] += (h >> 63) != 0 ? 1.0 : -1.0;
      }
      v[dim - 1] += 0.5;  // keeps empty texts off the zero vector
      if (options.mismatched_embed_dims && t + 1 == texts.size()) v.pop_back();
      vectors.push_back(v);
    }
    return {{"vectors", vectors}, {"dim", dim}};
  }

  nlohmann::json Generate(const nlohmann::json& body) {
    const nlohmann::json& cls = Field(body, "class");
    auto label = cls.is_string() ? ParseLabel(cls.get<std::string>()) : std::nullopt;
    if (!label) throw HandlerError{400, "invalid_request", "unknown class"};
    const auto seeds = StringList(body, "seed_posts");
    if (seeds.empty()) throw HandlerError{400, "invalid_request", "no seed posts"};
    const nlohmann::json& n = Field(body, "n");
    if (!n.is_number_integer() || n.get<int64_t>() < 1) {
      throw HandlerError{400, "invalid_request", "n must be a positive integer"};
    }
    const nlohmann::json& seed_field = Field(body, "seed");
    if (!seed_field.is_number_integer()) throw HandlerError{400, "invalid_request", "seed must be an integer"};
    const uint64_t seed = seed_field.get<uint64_t>();
    std::vector<std::string> texts;
    for (int64_t k = 0; k < n.get<int64_t>(); ++k) {
      const std::string& base = seeds[(seed + static_cast<uint64_t>(k)) % seeds.size()];
      texts.push_back(fmt::format("{} ({} variant {}.{})", base, LabelName(*label), seed % 1000, k));
    }
    return {{"texts", texts}};
  }

  nlohmann::json Fit(const nlohmann::json& body) {
    const nlohmann::json& items = Field(body, "items");
    if (!items.is_array() || items.empty()) throw HandlerError{400, "invalid_request", "items must be a non-empty array"};
    Field(body, "config");
    const nlohmann::json& key = Field(body, "idempotency_key");
    if (!key.is_string() || key.get<std::string>().empty()) {
      throw HandlerError{400, "invalid_request", "idempotency_key must be a non-empty string"};
    }
    std::array<double, kNumLabels> counts{};
    for (const auto& item : items) {
      if (!item.is_object() || !item.contains("text") || !item["text"].is_string() ||
          !item.contains("label") || !item["label"].is_string()) {
        throw HandlerError{400, "invalid_request", "items need text and label strings"};
      }
      auto label = ParseLabel(item["label"].get<std::string>());
      if (!label) throw HandlerError{400, "invalid_request", "unknown label in items"};
      counts[Index(*label)] += 1.0;
    }
    for (double& c : counts) c /= static_cast<double>(items.size());
    const std::string id = "mock-" + Sha256Hex(key.get<std::string>()).substr(0, 16);
    std::lock_guard<std::mutex> lock(mutex);
    models[id] = counts;
    return {{"model_id", id}};
  }

  nlohmann::json PredictProba(const nlohmann::json& body) {
    const nlohmann::json& id = Field(body, "model_id");
    if (!id.is_string()) throw HandlerError{400, "invalid_request", "model_id must be a string"};
    const auto texts = StringList(body, "texts");
    std::array<double, kNumLabels> prior{};
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = models.find(id.get<std::string>());
      if (it == models.end()) {
        throw HandlerError{404, "unknown_model", "no model with id " + id.get<std::string>()};
      }
      prior = it->second;
    }
    nlohmann::json probs = nlohmann::json::array();
    for (size_t i = 0; i < texts.size(); ++i) probs.push_back(prior);
    return {{"probs", probs}};
  }

  nlohmann::json Chat(const nlohmann::json& body) {
    const nlohmann::json& system = Field(body, "system");
    const nlohmann::json& user = Field(body, "user");
    if (!system.is_string() || !user.is_string()) {
      throw HandlerError{400, "invalid_request", "system and user must be strings"};
    }
    const std::string text = user.get<std::string>();
    for (const std::string& marker : options.chat_garbage_markers) {
      if (text.find(marker) != std::string::npos) return {{"text", "I would rather not say."}};
    }
    const RiskLabel label =
        options.chat_label ? *options.chat_label : LabelAt(Fnv1a(text) % kNumLabels);
    return {{"text", fmt::format("Label: {}", PromptLabelName(label))}};
  }

  template <typename Handler>
  void Route(const std::string& path, Handler handler) {
    server.Post(path, [this, path, handler](const httplib::Request& req, httplib::Response& res) {
      const int64_t now = in_flight.fetch_add(1) + 1;
      int64_t seen = max_in_flight.load();
      while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
      }
      struct Leave {
        std::atomic<int64_t>& counter;
        ~Leave() { counter.fetch_sub(1); }
      } leave{in_flight};
      {
        std::lock_guard<std::mutex> lock(mutex);
        ++requests[path];
      }
      if (options.latency.count() > 0) std::this_thread::sleep_for(options.latency);
      if (options.auth_token &&
          req.get_header_value("Authorization") != "Bearer " + *options.auth_token) {
        ReplyError(res, 401, "unauthorized", "missing or wrong bearer token");
        return;
      }
      if (failures_left.fetch_sub(1) > 0) {
        ReplyError(res, options.fail_status, "unavailable", "injected failure");
        return;
      }
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (!body.is_object()) {
        ReplyError(res, 400, "invalid_json", "request body is not a JSON object");
        return;
      }
      {
        std::lock_guard<std::mutex> lock(mutex);
        last[path] = body;
      }
      try {
        Reply(res, 200, (this->*handler)(body));
      } catch (const HandlerError& e) {
        ReplyError(res, e.status, e.code, e.message);
      } catch (const std::exception& e) {
        ReplyError(res, 500, "internal", e.what());
      }
    });
  }
};

MockModelServer::MockModelServer(MockServerOptions options) : impl_(std::make_unique<Impl>()) {
  if (options.embed_dim < 2) throw ConfigError("mock embed_dim must be >= 2");
  impl_->options = std::move(options);
  impl_->failures_left = impl_->options.fail_first_n;
  impl_->Route("/v1/embed", &Impl::Embed);
  impl_->Route("/v1/generate", &Impl::Generate);
  impl_->Route("/v1/fit", &Impl::Fit);
  impl_->Route("/v1/predict_proba", &Impl::PredictProba);
  impl_->Route("/v1/chat", &Impl::Chat);
  impl_->server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200,
          {{"status", "ok"},
           {"models", {{"embed", "mock-hash"}, {"generate", "mock-template"},
                       {"classifier", "mock-prior"}, {"chat", "mock-chat"}}}});
  });
}

MockModelServer::~MockModelServer() { Stop(); }

void MockModelServer::Start() {
  if (impl_->running) return;
  Impl& s = *impl_;
  if (s.options.port == 0) {
    s.port = s.server.bind_to_any_port(s.options.host);
  } else {
    s.port = s.server.bind_to_port(s.options.host, s.options.port) ? s.options.port : -1;
  }
  if (s.port <= 0) {
    throw TransportError(fmt::format("mock server cannot bind {}:{}", s.options.host, s.options.port));
  }
  s.thread = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  s.running = true;
}

void MockModelServer::Stop() {
  if (!impl_ || !impl_->running) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->running = false;
}

void MockModelServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

int MockModelServer::port() const { return impl_->port; }

std::string MockModelServer::base_url() const {
  return fmt::format("http://{}:{}", impl_->options.host, impl_->port);
}

MockServerStats MockModelServer::stats() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return {impl_->requests, impl_->max_in_flight.load()};
}

nlohmann::json MockModelServer::last_request(const std::string& path) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto it = impl_->last.find(path);
  return it == impl_->last.end() ? nlohmann::json() : it->second;
}

}  // namespace risklens
