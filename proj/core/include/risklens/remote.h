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

#ifndef RISKLENS_REMOTE_H_
#define RISKLENS_REMOTE_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/augment.h"
#include "risklens/classifier.h"
#include "risklens/label.h"

namespace risklens {

struct ServerEndpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  std::string model;     // opaque backend model identifier
  std::chrono::milliseconds timeout{30000};
  int64_t max_retries = 3;
  int64_t max_concurrency = 4;
  std::optional<std::string> auth_token;
  std::chrono::milliseconds backoff_initial{100};
  std::chrono::milliseconds backoff_max{5000};

  // Throws ConfigError on an empty URL, negative retries, or concurrency < 1.
  void Validate() const;
  // Echo for manifests. The token is never written, only whether one is set.
  nlohmann::json ToJson() const;
};

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

struct AuditEntry {
  std::string endpoint;
  std::string request_digest;
  std::optional<std::string> response_digest;
  std::string outcome;  // "ok", "remote_error:<code>", "transport_error"
  int64_t attempts = 0;
  nlohmann::json extra = nlohmann::json::object();
};

// Thread-safe JSONL sink, one line per logical request:
// {timestamp, endpoint, request_digest, response_digest, outcome, attempts}
// plus any extra fields.
class AuditLog {
 public:
  using Clock = std::function<std::string()>;

  // Appends to `path`, creating it if needed.
  explicit AuditLog(const std::filesystem::path& path, Clock clock = nullptr);
  // Writes to a caller-owned stream.
  explicit AuditLog(std::ostream* out, Clock clock = nullptr);

  void Record(const AuditEntry& entry);
  int64_t lines() const;

  // UTC, "YYYY-MM-DDTHH:MM:SS.mmmZ".
  static std::string NowUtc();

 private:
  std::ofstream file_;
  std::ostream* out_;
  Clock clock_;
  mutable std::mutex mutex_;
  int64_t lines_ = 0;
};

// Client for the five-endpoint JSON protocol. Shareable across threads; at
// most endpoint.max_concurrency requests are in flight at any time.
//
// Transient failures (connection errors, timeouts, HTTP 429/502/503/504) are
// retried with exponential backoff and jitter, up to 1 + max_retries attempts
// in total, then a TransportError is thrown. Any other status >= 400 throws a
// RemoteError carrying the {code, message} payload verbatim.
class ModelClient {
 public:
  explicit ModelClient(ServerEndpoint endpoint,
                       std::shared_ptr<AuditLog> audit = nullptr);

  const ServerEndpoint& endpoint() const { return endpoint_; }

  // POST `path` with a JSON body; returns the parsed JSON object response.
  nlohmann::json Call(const std::string& path, const nlohmann::json& body,
                      const nlohmann::json& audit_extra = nlohmann::json::object()) const;

  // GET /v1/health. Throws TransportError when unreachable.
  nlohmann::json Health() const;
  bool Healthy() const;

  // POST /v1/embed. One vector per text, all of the reported dimension.
  std::vector<std::vector<double>> Embed(std::span<const std::string> texts) const;
  // POST /v1/generate. Exactly n texts or GenerationError.
  std::vector<std::string> Generate(RiskLabel label,
                                    std::span<const std::string> seed_posts,
                                    int64_t n, uint64_t seed) const;
  // POST /v1/fit. The idempotency key is the SHA-256 of the items and
  // config, so a retried fit maps onto the same backend job.
  std::string Fit(std::span<const LabeledText> items,
                  const nlohmann::json& config) const;
  static std::string IdempotencyKey(std::span<const LabeledText> items,
                                    const nlohmann::json& config);
  // POST /v1/predict_proba, order preserved. Unknown handles surface as a
  // RemoteError with code "unknown_model".
  std::vector<ProbDistribution> PredictProba(const std::string& model_id,
                                             std::span<const std::string> texts) const;
  // POST /v1/chat. No sampling parameters are sent.
  std::string Chat(const std::string& system, const std::string& user) const;

  // Attempts sent over the wire, retries included.
  int64_t attempts_sent() const { return attempts_.load(); }

 private:
  class Slot;

  ServerEndpoint endpoint_;
  std::shared_ptr<AuditLog> audit_;
  std::string host_;
  int port_ = 0;
  mutable std::mutex slot_mutex_;
  mutable std::condition_variable slot_cv_;
  mutable int64_t in_flight_ = 0;
  mutable std::atomic<int64_t> attempts_{0};
};

// Remote binding of the generator contract.
class RemoteTextGenerator : public TextGenerator {
 public:
  explicit RemoteTextGenerator(std::shared_ptr<const ModelClient> client);

  std::vector<std::string> Generate(RiskLabel label, std::span<const Post> seeds,
                                    int64_t n, uint64_t seed) const override;
  std::string name() const override { return "remote"; }

 private:
  std::shared_ptr<const ModelClient> client_;
};

// A model fitted by the backend, addressed by its opaque handle.
class RemoteModel : public ProbabilisticModel {
 public:
  RemoteModel(std::shared_ptr<const ModelClient> client, std::string model_id);

  std::vector<ProbDistribution> PredictProba(
      std::span<const std::string> texts) const override;
  nlohmann::json ToJson() const override;
  const std::string& model_id() const { return model_id_; }

 private:
  std::shared_ptr<const ModelClient> client_;
  std::string model_id_;
};

// Fits through /v1/fit with the classifier config echoed as the request
// config (the backend owns the architecture).
class RemoteClassifierFactory : public ClassifierFactory {
 public:
  explicit RemoteClassifierFactory(std::shared_ptr<const ModelClient> client);

  std::unique_ptr<ProbabilisticModel> Fit(
      std::span<const LabeledText> data,
      const ClassifierConfig& config) const override;
  std::string name() const override { return "remote"; }

 private:
  std::shared_ptr<const ModelClient> client_;
};

// Rebuilds a model from its ToJson form. Remote models and embedding
// featurizers need `client`; TF-IDF native models accept nullptr.
std::unique_ptr<ProbabilisticModel> ModelFromJson(const nlohmann::json& j,
                                                  std::shared_ptr<const ModelClient> client);

}  // namespace risklens

#endif  // RISKLENS_REMOTE_H_
