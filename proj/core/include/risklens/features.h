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

#ifndef RISKLENS_FEATURES_H_
#define RISKLENS_FEATURES_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace risklens {

class ModelClient;

// Sparse (strictly increasing indices) or dense feature vector of a fixed
// dimension.
class FeatureVector {
 public:
  FeatureVector() = default;

  // Throws DataError unless indices are strictly increasing and < dimension.
  static FeatureVector Sparse(size_t dimension, std::vector<uint32_t> indices,
                              std::vector<double> values);
  static FeatureVector Dense(std::vector<double> values);
  static FeatureVector Zero(size_t dimension) { return Sparse(dimension, {}, {}); }

  size_t dimension() const { return dimension_; }
  bool is_dense() const { return dense_; }
  // Empty for dense vectors.
  std::span<const uint32_t> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }
  size_t nonzeros() const { return values_.size(); }

  double Dot(std::span<const double> weights) const;
  // out += scale * this
  void AddScaledTo(std::span<double> out, double scale) const;
  double Norm() const;
  // Scales to unit L2 norm; the zero vector stays zero.
  void NormalizeL2();
  std::vector<double> ToDense() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  size_t dimension_ = 0;
  bool dense_ = false;
  std::vector<uint32_t> indices_;
  std::vector<double> values_;
};

// Lowercases and splits on every code point that is not a letter, digit,
// apostrophe or underscore.
std::vector<std::string> Tokenize(std::string_view text);

struct TfIdfConfig {
  int64_t min_df = 1;
  std::optional<int64_t> max_features;
  bool sublinear_tf = false;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<int64_t> df,
             int64_t n_documents);

  size_t size() const { return tokens_.size(); }
  std::optional<uint32_t> Lookup(std::string_view token) const;
  const std::string& token(size_t index) const { return tokens_[index]; }
  int64_t document_frequency(size_t index) const { return df_[index]; }
  int64_t n_documents() const { return n_documents_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;  // index order (lexicographic)
  std::vector<int64_t> df_;
  std::unordered_map<std::string, uint32_t> index_;
  int64_t n_documents_ = 0;
};

// Smoothed idf: ln((1 + n_documents) / (1 + df)) + 1.
double SmoothedIdf(int64_t n_documents, int64_t df);

struct TfIdfModel {
  Vocabulary vocabulary;
  std::vector<double> idf;
  TfIdfConfig config;

  nlohmann::json ToJson() const;
  static TfIdfModel FromJson(const nlohmann::json& j);
};

// Vocabulary keeps tokens with df >= min_df, truncated to max_features by
// (df descending, token ascending); indices follow lexicographic token
// order. Throws DataError on an empty corpus or an empty vocabulary.
TfIdfModel FitTfIdf(std::span<const std::string> texts, const TfIdfConfig& config);

// tf (raw count, or 1 + ln(count) when sublinear) times idf, L2-normalized.
// Out-of-vocabulary tokens are ignored.
FeatureVector TransformTfIdf(const TfIdfModel& model, std::string_view text);

// One L2-normalized dense vector per text via the remote embed endpoint.
// Throws TransportError after retries and DataError on mixed dimensions.
std::vector<FeatureVector> EmbedBatch(std::span<const std::string> texts,
                                      const ModelClient& client,
                                      size_t batch_size = 64);

// Maps texts into a fixed feature space. Implementations are immutable once
// built and safe to share across threads.
class Featurizer {
 public:
  virtual ~Featurizer() = default;
  virtual std::vector<FeatureVector> Transform(
      std::span<const std::string> texts) const = 0;
  virtual size_t dimension() const = 0;
  virtual nlohmann::json ToJson() const = 0;
};

class TfIdfFeaturizer : public Featurizer {
 public:
  explicit TfIdfFeaturizer(TfIdfModel model) : model_(std::move(model)) {}

  std::vector<FeatureVector> Transform(
      std::span<const std::string> texts) const override;
  size_t dimension() const override { return model_.vocabulary.size(); }
  nlohmann::json ToJson() const override;

  const TfIdfModel& model() const { return model_; }

 private:
  TfIdfModel model_;
};

// Remote sentence embeddings, memoized per text so repeated self-training
// rounds do not re-request the same posts.
class EmbeddingFeaturizer : public Featurizer {
 public:
  explicit EmbeddingFeaturizer(std::shared_ptr<const ModelClient> client);

  std::vector<FeatureVector> Transform(
      std::span<const std::string> texts) const override;
  // 0 until the first successful Transform.
  size_t dimension() const override;
  nlohmann::json ToJson() const override;

 private:
  std::shared_ptr<const ModelClient> client_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, FeatureVector> cache_;
  mutable size_t dimension_ = 0;
};

// Rebuilds a featurizer from its ToJson form. Embedding featurizers need the
// client they were built with; pass nullptr for TF-IDF.
std::shared_ptr<const Featurizer> FeaturizerFromJson(
    const nlohmann::json& j, std::shared_ptr<const ModelClient> client);

}  // namespace risklens

#endif  // RISKLENS_FEATURES_H_
