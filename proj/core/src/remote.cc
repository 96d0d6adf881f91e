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

#include "risklens/remote.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "risklens/concurrency.h"
#include "risklens/error.h"
#include "risklens/features.h"
#include "risklens/rng.h"

namespace risklens {
namespace {

constexpr size_t kPredictBatch = 64;

bool IsTransientStatus(int status) {
  return status == 429 || status == 502 || status == 503 || status == 504;
}

std::pair<std::string, int> ParseBaseUrl(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw ConfigError("endpoint base_url must start with http://, got '" + url + "'");
  }
  std::string rest = url.substr(kScheme.size());
  while (!rest.empty() && rest.back() == '/') rest.pop_back();
  if (rest.find('/') != std::string::npos) {
    throw ConfigError("endpoint base_url must not carry a path: '" + url + "'");
  }
  const size_t colon = rest.rfind(':');
  if (colon == std::string::npos) return {rest, 80};
  const std::string port_text = rest.substr(colon + 1);
  int port = 0;
  try {
    size_t used = 0;
    port = std::stoi(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("bad port in endpoint base_url '" + url + "'");
  }
  if (port <= 0 || port > 65535) throw ConfigError("port out of range in '" + url + "'");
  return {rest.substr(0, colon), port};
}

std::pair<std::string, std::string> ParseErrorBody(const std::string& body,
                                                   int status) {
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_object() && parsed.contains("code") && parsed["code"].is_string()) {
    std::string message =
        parsed.contains("message") && parsed["message"].is_string()
            ? parsed["message"].get<std::string>()
            : std::string();
    return {parsed["code"].get<std::string>(), message};
  }
  return {fmt::format("http_{}", status), body};
}

[[noreturn]] void BadResponse(const std::string& path, const std::string& what) {
  throw DataError(fmt::format("malformed response from {}: {}", path, what));
}

}  // namespace

void ServerEndpoint::Validate() const {
  if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
  ParseBaseUrl(base_url);
  if (max_retries < 0) throw ConfigError("endpoint max_retries must be >= 0");
  if (max_concurrency < 1) throw ConfigError("endpoint max_concurrency must be >= 1");
  if (timeout.count() <= 0) throw ConfigError("endpoint timeout must be > 0");
  if (backoff_initial.count() < 0 || backoff_max < backoff_initial) {
    throw ConfigError("endpoint backoff range is invalid");
  }
}

nlohmann::json ServerEndpoint::ToJson() const {
  return {{"base_url", base_url},
          {"model", model},
          {"timeout_ms", timeout.count()},
          {"max_retries", max_retries},
          {"max_concurrency", max_concurrency},
          {"backoff_initial_ms", backoff_initial.count()},
          {"backoff_max_ms", backoff_max.count()},
          {"auth", auth_token.has_value()}};
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

AuditLog::AuditLog(const std::filesystem::path& path, Clock clock)
    : file_(path, std::ios::app), out_(&file_), clock_(std::move(clock)) {
  if (!file_) throw ConfigError("cannot open audit log " + path.string());
  if (!clock_) clock_ = &AuditLog::NowUtc;
}

AuditLog::AuditLog(std::ostream* out, Clock clock)
    : out_(out), clock_(std::move(clock)) {
  if (!clock_) clock_ = &AuditLog::NowUtc;
}

void AuditLog::Record(const AuditEntry& entry) {
  nlohmann::ordered_json line;
  line["timestamp"] = clock_();
  line["endpoint"] = entry.endpoint;
  line["request_digest"] = entry.request_digest;
  line["response_digest"] = entry.response_digest
                                ? nlohmann::ordered_json(*entry.response_digest)
                                : nlohmann::ordered_json(nullptr);
  line["outcome"] = entry.outcome;
  line["attempts"] = entry.attempts;
  for (const auto& [key, value] : entry.extra.items()) line[key] = value;
  const std::string text = line.dump();
  std::lock_guard<std::mutex> lock(mutex_);
  *out_ << text << '\n';
  out_->flush();
  ++lines_;
}

int64_t AuditLog::lines() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return lines_;
}

std::string AuditLog::NowUtc() {
  const auto now = std::chrono::system_clock::now();
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) % 1000;
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%S", &utc);
  return fmt::format("{}.{:03d}Z", buffer, static_cast<int>(millis.count()));
}

// Holds one of the endpoint's concurrency slots for its lifetime.
class ModelClient::Slot {
 public:
  explicit Slot(const ModelClient& client) : client_(client) {
    std::unique_lock<std::mutex> lock(client_.slot_mutex_);
    client_.slot_cv_.wait(lock, [this] {
      return client_.in_flight_ < client_.endpoint_.max_concurrency;
    });
    ++client_.in_flight_;
  }
  ~Slot() {
    {
      std::lock_guard<std::mutex> lock(client_.slot_mutex_);
      --client_.in_flight_;
    }
    client_.slot_cv_.notify_one();
  }
  Slot(const Slot&) = delete;
  Slot& operator=(const Slot&) = delete;

 private:
  const ModelClient& client_;
};

ModelClient::ModelClient(ServerEndpoint endpoint, std::shared_ptr<AuditLog> audit)
    : endpoint_(std::move(endpoint)), audit_(std::move(audit)) {
  endpoint_.Validate();
  std::tie(host_, port_) = ParseBaseUrl(endpoint_.base_url);
}

nlohmann::json ModelClient::Call(const std::string& path, const nlohmann::json& body,
                                 const nlohmann::json& audit_extra) const {
  const std::string payload = body.dump();
  AuditEntry entry;
  entry.endpoint = path;
  entry.request_digest = Sha256Hex(payload);
  entry.extra = audit_extra;
  auto record = [&](std::string outcome) {
    entry.outcome = std::move(outcome);
    if (audit_) audit_->Record(entry);
  };

  Rng jitter(DeriveSeed(std::hash<std::string>{}(entry.request_digest), "remote.backoff"));
  const int64_t max_attempts = 1 + endpoint_.max_retries;
  std::string last_failure;
  for (int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempt > 0) {
      const double base = std::min<double>(
          static_cast<double>(endpoint_.backoff_max.count()),
          static_cast<double>(endpoint_.backoff_initial.count()) *
              std::pow(2.0, static_cast<double>(attempt - 1)));
      const double wait = base * (0.5 + 0.5 * jitter.Uniform01());
      std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(wait));
    }
    entry.attempts = attempt + 1;
    httplib::Result result;
    {
      Slot slot(*this);
      httplib::Client http(host_, port_);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout);
      http.set_connection_timeout(timeout);
      http.set_read_timeout(timeout);
      http.set_write_timeout(timeout);
      http.set_keep_alive(false);
      if (endpoint_.auth_token) http.set_bearer_token_auth(*endpoint_.auth_token);
      attempts_.fetch_add(1);
      result = http.Post(path, payload, "application/json");
    }
    if (!result) {
      last_failure = httplib::to_string(result.error());
      continue;
    }
    const int status = result->status;
    if (IsTransientStatus(status)) {
      last_failure = fmt::format("HTTP {}", status);
      continue;
    }
    entry.response_digest = Sha256Hex(result->body);
    if (status >= 400) {
      auto [code, message] = ParseErrorBody(result->body, status);
      record("remote_error:" + code);
      throw RemoteError(status, code, message);
    }
    auto parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (!parsed.is_object()) {
      record("bad_response");
      BadResponse(path, "body is not a JSON object");
    }
    record("ok");
    return parsed;
  }
  record("transport_error");
  throw TransportError(fmt::format("{}{} failed after {} attempt(s): {}",
                                   endpoint_.base_url, path, max_attempts, last_failure));
}

nlohmann::json ModelClient::Health() const {
  const int64_t max_attempts = 1 + endpoint_.max_retries;
  std::string last_failure;
  for (int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(endpoint_.backoff_initial);
    Slot slot(*this);
    httplib::Client http(host_, port_);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout);
    http.set_connection_timeout(timeout);
    http.set_read_timeout(timeout);
    if (endpoint_.auth_token) http.set_bearer_token_auth(*endpoint_.auth_token);
    attempts_.fetch_add(1);
    auto result = http.Get("/v1/health");
    if (!result) {
      last_failure = httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_failure = fmt::format("HTTP {}", result->status);
      continue;
    }
    auto parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (!parsed.is_object()) BadResponse("/v1/health", "body is not a JSON object");
    return parsed;
  }
  throw TransportError(fmt::format("{} is not healthy: {}", endpoint_.base_url, last_failure));
}

bool ModelClient::Healthy() const {
  try {
    Health();
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::vector<double>> ModelClient::Embed(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  nlohmann::json body = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  if (!endpoint_.model.empty()) body["model"] = endpoint_.model;
  nlohmann::json response = Call("/v1/embed", body);
  try {
    auto vectors = response.at("vectors").get<std::vector<std::vector<double>>>();
    const auto dim = response.at("dim").get<size_t>();
    if (vectors.size() != texts.size()) {
      BadResponse("/v1/embed", fmt::format("{} vectors for {} texts", vectors.size(), texts.size()));
    }
    for (const auto& v : vectors) {
      if (v.size() != dim) {
        throw DataError(fmt::format("embedding dimension mismatch: got {}, expected {}",
                                    v.size(), dim));
      }
      for (double x : v) {
        if (!std::isfinite(x)) BadResponse("/v1/embed", "non-finite embedding value");
      }
    }
    if (dim == 0) BadResponse("/v1/embed", "zero-dimensional embeddings");
    return vectors;
  } catch (const nlohmann::json::exception& e) {
    BadResponse("/v1/embed", e.what());
  }
}

std::vector<std::string> ModelClient::Generate(RiskLabel label,
                                               std::span<const std::string> seed_posts,
                                               int64_t n, uint64_t seed) const {
  nlohmann::json body = {{"class", std::string(LabelName(label))},
                         {"seed_posts", std::vector<std::string>(seed_posts.begin(), seed_posts.end())},
                         {"n", n},
                         {"seed", seed}};
  if (!endpoint_.model.empty()) body["model"] = endpoint_.model;
  nlohmann::json response = Call("/v1/generate", body);
  std::vector<std::string> texts;
  try {
    texts = response.at("texts").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    BadResponse("/v1/generate", e.what());
  }
  if (static_cast<int64_t>(texts.size()) != n) {
    throw GenerationError(fmt::format("remote generator returned {} of {} texts for class {}",
                                      texts.size(), n, LabelName(label)),
                          static_cast<int64_t>(texts.size()));
  }
  return texts;
}

std::string ModelClient::IdempotencyKey(std::span<const LabeledText> items,
                                        const nlohmann::json& config) {
  nlohmann::json key_items = nlohmann::json::array();
  for (const LabeledText& item : items) {
    key_items.push_back({{"text", item.text}, {"label", std::string(LabelName(item.label))}});
  }
  return Sha256Hex(nlohmann::json{{"items", key_items}, {"config", config}}.dump());
}

std::string ModelClient::Fit(std::span<const LabeledText> items,
                             const nlohmann::json& config) const {
  if (items.empty()) throw TrainingError("remote fit needs at least one labeled item");
  nlohmann::json wire_items = nlohmann::json::array();
  for (const LabeledText& item : items) {
    wire_items.push_back({{"text", item.text}, {"label", std::string(LabelName(item.label))}});
  }
  nlohmann::json body = {{"items", std::move(wire_items)},
                         {"config", config},
                         {"idempotency_key", IdempotencyKey(items, config)}};
  if (!endpoint_.model.empty()) body["model"] = endpoint_.model;
  nlohmann::json response = Call("/v1/fit", body);
  auto it = response.find("model_id");
  if (it == response.end() || !it->is_string() || it->get<std::string>().empty()) {
    BadResponse("/v1/fit", "missing model_id");
  }
  return it->get<std::string>();
}

std::vector<ProbDistribution> ModelClient::PredictProba(
    const std::string& model_id, std::span<const std::string> texts) const {
  const size_t n_batches = (texts.size() + kPredictBatch - 1) / kPredictBatch;
  std::vector<std::vector<ProbDistribution>> batches(n_batches);
  ParallelFor(n_batches, static_cast<size_t>(endpoint_.max_concurrency), [&](size_t b) {
    const size_t begin = b * kPredictBatch;
    const size_t count = std::min(kPredictBatch, texts.size() - begin);
    auto slice = texts.subspan(begin, count);
    nlohmann::json body = {{"model_id", model_id},
                           {"texts", std::vector<std::string>(slice.begin(), slice.end())}};
    nlohmann::json response = Call("/v1/predict_proba", body);
    std::vector<std::vector<double>> rows;
    try {
      rows = response.at("probs").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
      BadResponse("/v1/predict_proba", e.what());
    }
    if (rows.size() != count) {
      BadResponse("/v1/predict_proba",
                  fmt::format("{} rows for {} texts", rows.size(), count));
    }
    auto& out = batches[b];
    out.reserve(count);
    for (const auto& row : rows) {
      if (row.size() != kNumLabels) BadResponse("/v1/predict_proba", "row is not 4 wide");
      ProbDistribution d;
      std::copy(row.begin(), row.end(), d.p.begin());
      if (!d.IsValid(1e-6)) BadResponse("/v1/predict_proba", "row is not a distribution");
      out.push_back(d);
    }
  });
  std::vector<ProbDistribution> all;
  all.reserve(texts.size());
  for (auto& batch : batches) all.insert(all.end(), batch.begin(), batch.end());
  return all;
}

std::string ModelClient::Chat(const std::string& system, const std::string& user) const {
  nlohmann::json body = {{"system", system}, {"user", user}};
  if (!endpoint_.model.empty()) body["model"] = endpoint_.model;
  nlohmann::json response = Call("/v1/chat", body, {{"sampling", "backend_default"}});
  auto it = response.find("text");
  if (it == response.end() || !it->is_string()) BadResponse("/v1/chat", "missing text");
  return it->get<std::string>();
}

RemoteTextGenerator::RemoteTextGenerator(std::shared_ptr<const ModelClient> client)
    : client_(std::move(client)) {
  if (!client_) throw ConfigError("remote generator needs an endpoint");
}

std::vector<std::string> RemoteTextGenerator::Generate(RiskLabel label,
                                                       std::span<const Post> seeds,
                                                       int64_t n, uint64_t seed) const {
  if (n < 1) throw ConfigError("generator needs n >= 1");
  std::vector<std::string> texts;
  texts.reserve(seeds.size());
  for (const Post& post : seeds) texts.push_back(post.text);
  return client_->Generate(label, texts, n, seed);
}

RemoteModel::RemoteModel(std::shared_ptr<const ModelClient> client, std::string model_id)
    : client_(std::move(client)), model_id_(std::move(model_id)) {
  if (model_id_.empty()) throw DataError("empty remote model handle");
}

std::vector<ProbDistribution> RemoteModel::PredictProba(
    std::span<const std::string> texts) const {
  return client_->PredictProba(model_id_, texts);
}

nlohmann::json RemoteModel::ToJson() const {
  return {{"kind", "remote"}, {"model_id", model_id_}, {"model", client_->endpoint().model}};
}

RemoteClassifierFactory::RemoteClassifierFactory(std::shared_ptr<const ModelClient> client)
    : client_(std::move(client)) {
  if (!client_) throw ConfigError("remote classifier needs an endpoint");
}

std::unique_ptr<ProbabilisticModel> RemoteClassifierFactory::Fit(
    std::span<const LabeledText> data, const ClassifierConfig& config) const {
  config.Validate();
  std::string model_id = client_->Fit(data, config.ToJson());
  return std::make_unique<RemoteModel>(client_, std::move(model_id));
}

std::unique_ptr<ProbabilisticModel> ModelFromJson(const nlohmann::json& j,
                                                  std::shared_ptr<const ModelClient> client) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "native_linear") {
      auto featurizer = FeaturizerFromJson(j.at("featurizer"), client);
      LinearModel linear = LinearModel::FromJson(j.at("linear"));
      if (featurizer->dimension() != 0 && featurizer->dimension() != linear.dimension) {
        throw DataError("featurizer and model dimensions differ");
      }
      TrainReport report;
      const auto& r = j.at("train_report");
      report.epoch_loss = r.at("epoch_loss").get<std::vector<double>>();
      report.train_accuracy = r.at("train_accuracy").get<double>();
      report.skipped_steps = r.at("skipped_steps").get<int64_t>();
      return std::make_unique<NativeLinearModel>(std::move(featurizer), std::move(linear),
                                                 std::move(report));
    }
    if (kind == "remote") {
      if (!client) throw ConfigError("remote model artifact needs an endpoint");
      return std::make_unique<RemoteModel>(std::move(client), j.at("model_id").get<std::string>());
    }
    throw DataError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model artifact: ") + e.what());
  }
}

}  // namespace risklens
