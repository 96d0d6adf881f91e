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

#include "risklens/features.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "risklens/concurrency.h"
#include "risklens/error.h"
#include "risklens/preprocess.h"
#include "risklens/remote.h"

namespace risklens {

FeatureVector FeatureVector::Sparse(size_t dimension,
                                    std::vector<uint32_t> indices,
                                    std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw DataError("sparse vector needs one value per index");
  }
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dimension || (i > 0 && indices[i] <= indices[i - 1])) {
      throw DataError("sparse indices must be strictly increasing and in range");
    }
  }
  FeatureVector v;
  v.dimension_ = dimension;
  v.indices_ = std::move(indices);
  v.values_ = std::move(values);
  return v;
}

FeatureVector FeatureVector::Dense(std::vector<double> values) {
  FeatureVector v;
  v.dimension_ = values.size();
  v.dense_ = true;
  v.values_ = std::move(values);
  return v;
}

double FeatureVector::Dot(std::span<const double> weights) const {
  double sum = 0.0;
  if (dense_) {
    for (size_t i = 0; i < values_.size(); ++i) sum += values_[i] * weights[i];
  } else {
    for (size_t k = 0; k < indices_.size(); ++k) {
      sum += values_[k] * weights[indices_[k]];
    }
  }
  return sum;
}

void FeatureVector::AddScaledTo(std::span<double> out, double scale) const {
  if (dense_) {
    for (size_t i = 0; i < values_.size(); ++i) out[i] += scale * values_[i];
  } else {
    for (size_t k = 0; k < indices_.size(); ++k) {
      out[indices_[k]] += scale * values_[k];
    }
  }
}

double FeatureVector::Norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

void FeatureVector::NormalizeL2() {
  const double norm = Norm();
  if (norm == 0.0) return;
  for (double& v : values_) v /= norm;
}

std::vector<double> FeatureVector::ToDense() const {
  if (dense_) return values_;
  std::vector<double> out(dimension_, 0.0);
  for (size_t k = 0; k < indices_.size(); ++k) out[indices_[k]] = values_[k];
  return out;
}

std::vector<std::string> Tokenize(std::string_view text) {
  const std::string lower = Lowercase(text);
  std::vector<std::string> tokens;
  const auto* s = reinterpret_cast<const uint8_t*>(lower.data());
  const int32_t length = static_cast<int32_t>(lower.size());
  int32_t i = 0;
  int32_t start = -1;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    const bool word = c >= 0 && (u_isalpha(c) || u_isdigit(c) || c == '\'' || c == '_');
    if (word) {
      if (start < 0) start = at;
    } else if (start >= 0) {
      tokens.emplace_back(lower.substr(static_cast<size_t>(start),
                                       static_cast<size_t>(at - start)));
      start = -1;
    }
  }
  if (start >= 0) tokens.emplace_back(lower.substr(static_cast<size_t>(start)));
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<int64_t> df,
                       int64_t n_documents)
    : tokens_(std::move(tokens)), df_(std::move(df)), n_documents_(n_documents) {
  if (tokens_.size() != df_.size()) {
    throw DataError("vocabulary needs one document frequency per token");
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (df_[i] < 1 || df_[i] > n_documents_) {
      throw DataError("document frequency out of range for '" + tokens_[i] + "'");
    }
    if (!index_.emplace(tokens_[i], static_cast<uint32_t>(i)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::optional<uint32_t> Vocabulary::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double SmoothedIdf(int64_t n_documents, int64_t df) {
  return std::log((1.0 + static_cast<double>(n_documents)) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

nlohmann::json TfIdfModel::ToJson() const {
  nlohmann::json df = nlohmann::json::array();
  for (size_t i = 0; i < vocabulary.size(); ++i) {
    df.push_back(vocabulary.document_frequency(i));
  }
  nlohmann::json j = {{"type", "tfidf"},
                      {"tokens", vocabulary.tokens()},
                      {"df", df},
                      {"n_documents", vocabulary.n_documents()},
                      {"idf", idf},
                      {"min_df", config.min_df},
                      {"sublinear_tf", config.sublinear_tf}};
  j["max_features"] = config.max_features ? nlohmann::json(*config.max_features)
                                          : nlohmann::json(nullptr);
  return j;
}

TfIdfModel TfIdfModel::FromJson(const nlohmann::json& j) {
  try {
    TfIdfModel model;
    model.vocabulary = Vocabulary(j.at("tokens").get<std::vector<std::string>>(),
                                  j.at("df").get<std::vector<int64_t>>(),
                                  j.at("n_documents").get<int64_t>());
    model.idf = j.at("idf").get<std::vector<double>>();
    model.config.min_df = j.at("min_df").get<int64_t>();
    model.config.sublinear_tf = j.at("sublinear_tf").get<bool>();
    if (!j.at("max_features").is_null()) {
      model.config.max_features = j.at("max_features").get<int64_t>();
    }
    if (model.idf.size() != model.vocabulary.size()) {
      throw DataError("idf length does not match vocabulary");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tf-idf model: ") + e.what());
  }
}

TfIdfModel FitTfIdf(std::span<const std::string> texts, const TfIdfConfig& config) {
  if (config.min_df < 1) throw ConfigError("min_df must be >= 1");
  if (config.max_features && *config.max_features < 1) {
    throw ConfigError("max_features must be >= 1");
  }
  std::map<std::string, int64_t> df;
  bool any_tokens = false;
  for (const std::string& text : texts) {
    std::vector<std::string> tokens = Tokenize(text);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    any_tokens = any_tokens || !unique.empty();
    for (const std::string& token : unique) ++df[token];
  }
  if (texts.empty() || !any_tokens) {
    throw DataError("cannot fit tf-idf on an empty corpus");
  }

  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [token, count] : df) {
    if (count >= config.min_df) kept.emplace_back(token, count);
  }
  if (kept.empty()) {
    throw DataError("vocabulary is empty after the min_df filter");
  }
  if (config.max_features && kept.size() > static_cast<size_t>(*config.max_features)) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(static_cast<size_t>(*config.max_features));
    std::sort(kept.begin(), kept.end());
  }

  const auto n_documents = static_cast<int64_t>(texts.size());
  std::vector<std::string> tokens;
  std::vector<int64_t> frequencies;
  TfIdfModel model;
  for (auto& [token, count] : kept) {
    tokens.push_back(token);
    frequencies.push_back(count);
    model.idf.push_back(SmoothedIdf(n_documents, count));
  }
  model.vocabulary = Vocabulary(std::move(tokens), std::move(frequencies), n_documents);
  model.config = config;
  return model;
}

FeatureVector TransformTfIdf(const TfIdfModel& model, std::string_view text) {
  std::map<uint32_t, int64_t> counts;
  for (const std::string& token : Tokenize(text)) {
    if (auto index = model.vocabulary.Lookup(token)) ++counts[*index];
  }
  std::vector<uint32_t> indices;
  std::vector<double> values;
  indices.reserve(counts.size());
  values.reserve(counts.size());
  for (const auto& [index, count] : counts) {
    const double tf = model.config.sublinear_tf
                          ? 1.0 + std::log(static_cast<double>(count))
                          : static_cast<double>(count);
    indices.push_back(index);
    values.push_back(tf * model.idf[index]);
  }
  FeatureVector v = FeatureVector::Sparse(model.vocabulary.size(),
                                          std::move(indices), std::move(values));
  v.NormalizeL2();
  return v;
}

std::vector<FeatureVector> EmbedBatch(std::span<const std::string> texts,
                                      const ModelClient& client,
                                      size_t batch_size) {
  if (texts.empty()) return {};
  if (batch_size == 0) batch_size = 1;
  const size_t n_batches = (texts.size() + batch_size - 1) / batch_size;
  std::vector<std::vector<std::vector<double>>> batches(n_batches);
  ParallelFor(n_batches, static_cast<size_t>(client.endpoint().max_concurrency),
              [&](size_t b) {
                const size_t begin = b * batch_size;
                const size_t count = std::min(batch_size, texts.size() - begin);
                batches[b] = client.Embed(texts.subspan(begin, count));
              });
  std::vector<FeatureVector> out;
  out.reserve(texts.size());
  const size_t dimension = batches.front().empty() ? 0 : batches.front().front().size();
  for (auto& batch : batches) {
    for (auto& vector : batch) {
      if (vector.size() != dimension || dimension == 0) {
        throw DataError("embedding dimension mismatch: expected " +
                        std::to_string(dimension) + ", got " +
                        std::to_string(vector.size()));
      }
      FeatureVector v = FeatureVector::Dense(std::move(vector));
      v.NormalizeL2();
      out.push_back(std::move(v));
    }
  }
  if (out.size() != texts.size()) {
    throw DataError("embed endpoint returned " + std::to_string(out.size()) +
                    " vectors for " + std::to_string(texts.size()) + " texts");
  }
  return out;
}

std::vector<FeatureVector> TfIdfFeaturizer::Transform(
    std::span<const std::string> texts) const {
  std::vector<FeatureVector> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) out.push_back(TransformTfIdf(model_, text));
  return out;
}

nlohmann::json TfIdfFeaturizer::ToJson() const { return model_.ToJson(); }

EmbeddingFeaturizer::EmbeddingFeaturizer(std::shared_ptr<const ModelClient> client)
    : client_(std::move(client)) {
  if (!client_) throw ConfigError("embedding featurizer needs a model client");
}

std::vector<FeatureVector> EmbeddingFeaturizer::Transform(
    std::span<const std::string> texts) const {
  std::vector<std::string> missing;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    std::set<std::string> queued;
    for (const std::string& text : texts) {
      if (!cache_.contains(text) && queued.insert(text).second) {
        missing.push_back(text);
      }
    }
  }
  if (!missing.empty()) {
    std::vector<FeatureVector> fetched = EmbedBatch(missing, *client_);
    std::lock_guard<std::mutex> lock(mutex_);
    for (size_t i = 0; i < missing.size(); ++i) {
      if (dimension_ == 0) dimension_ = fetched[i].dimension();
      if (fetched[i].dimension() != dimension_) {
        throw DataError("embedding dimension changed between requests");
      }
      cache_.emplace(missing[i], std::move(fetched[i]));
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<FeatureVector> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) out.push_back(cache_.at(text));
  return out;
}

size_t EmbeddingFeaturizer::dimension() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return dimension_;
}

nlohmann::json EmbeddingFeaturizer::ToJson() const {
  return {{"type", "remote_embed"},
          {"model", client_->endpoint().model},
          {"dimension", dimension()}};
}

std::shared_ptr<const Featurizer> FeaturizerFromJson(
    const nlohmann::json& j, std::shared_ptr<const ModelClient> client) {
  const std::string type = j.value("type", "");
  if (type == "tfidf") {
    return std::make_shared<TfIdfFeaturizer>(TfIdfModel::FromJson(j));
  }
  if (type == "remote_embed") {
    if (!client) throw ConfigError("remote_embed featurizer needs an endpoint");
    return std::make_shared<EmbeddingFeaturizer>(std::move(client));
  }
  throw DataError("unknown featurizer type '" + type + "'");
}

}  // namespace risklens
