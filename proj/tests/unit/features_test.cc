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

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "risklens/error.h"
#include "risklens/features.h"
#include "risklens/mock_server.h"
#include "risklens/remote.h"
#include "risklens/rng.h"

namespace risklens {
namespace {

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

double WeightOf(const FeatureVector& v, const TfIdfModel& m, const std::string& token) {
  const auto index = m.vocabulary.Lookup(token);
  if (!index) return 0.0;
  const auto idx = v.indices();
  for (size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] == *index) return v.values()[k];
  }
  return 0.0;
}

TEST_CASE("tokenizer") {
  CHECK(Tokenize("Hello, World! can't x_y 42") ==
        std::vector<std::string>{"hello", "world", "can't", "x_y", "42"});
  CHECK(Tokenize("  ...  ").empty());
  CHECK(Tokenize(":crying_face: ok") == std::vector<std::string>{"crying_face", "ok"});
}

TEST_CASE("fit_tfidf examples") {
  const std::vector<std::string> texts = {"a b", "a c"};
  const TfIdfModel m = FitTfIdf(texts, {});
  REQUIRE(m.vocabulary.size() == 3);
  CHECK(m.vocabulary.Lookup("a") == 0u);
  CHECK(m.vocabulary.document_frequency(0) == 2);
  CHECK_THAT(m.idf[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(m.idf[*m.vocabulary.Lookup("b")], WithinAbs(1.405465, 1e-6));
  CHECK_THAT(m.idf[*m.vocabulary.Lookup("c")], WithinAbs(1.405465, 1e-6));

  TfIdfConfig min2;
  min2.min_df = 2;
  const TfIdfModel filtered = FitTfIdf(texts, min2);
  CHECK(filtered.vocabulary.tokens() == std::vector<std::string>{"a"});

  const std::vector<std::string> single = {"x x"};
  CHECK_THAT(FitTfIdf(single, {}).idf[0], WithinAbs(1.0, 1e-15));

  const std::vector<std::string> empty;
  CHECK_THROWS_AS(FitTfIdf(empty, {}), DataError);
  const std::vector<std::string> punctuation = {"!!!", "..."};
  CHECK_THROWS_AS(FitTfIdf(punctuation, {}), DataError);
}

TEST_CASE("transform_tfidf examples") {
  const std::vector<std::string> texts = {"a b", "a c"};
  const TfIdfModel m = FitTfIdf(texts, {});
  const FeatureVector v = TransformTfIdf(m, "a b");
  // Pre-norm (1, ln(3/2) + 1); the L2 norm is sqrt(1 + 1.405465^2) = 1.724915.
  const double idf_b = std::log(1.5) + 1.0;
  const double norm = std::sqrt(1.0 + idf_b * idf_b);
  CHECK_THAT(WeightOf(v, m, "a"), WithinAbs(1.0 / norm, 1e-12));
  CHECK_THAT(WeightOf(v, m, "b"), WithinAbs(idf_b / norm, 1e-12));
  CHECK_THAT(WeightOf(v, m, "a"), WithinAbs(0.579739, 1e-6));
  CHECK_THAT(WeightOf(v, m, "b"), WithinAbs(0.814803, 1e-6));
  CHECK_THAT(v.Norm(), WithinAbs(1.0, 1e-12));

  const FeatureVector oov = TransformTfIdf(m, "z");
  CHECK(oov.nonzeros() == 0);
  CHECK(oov.dimension() == 3);

  CHECK(TransformTfIdf(m, "a a") == TransformTfIdf(m, "a"));
  CHECK_THAT(WeightOf(TransformTfIdf(m, "a"), m, "a"), WithinAbs(1.0, 1e-15));
}

TEST_CASE("max_features keeps the most frequent tokens, ties by token") {
  const std::vector<std::string> texts = {"d c b a", "d c b", "d c", "e"};
  TfIdfConfig c;
  c.max_features = 3;
  const TfIdfModel m = FitTfIdf(texts, c);
  CHECK(m.vocabulary.tokens() == std::vector<std::string>{"b", "c", "d"});
  c.max_features = 4;
  // a and e tie at df 1; a wins.
  CHECK(FitTfIdf(texts, c).vocabulary.tokens() == std::vector<std::string>{"a", "b", "c", "d"});
}

// Brute-force TF-IDF written directly from the formulas.
std::map<std::string, double> OracleTfIdf(const std::vector<std::string>& docs,
                                          const std::string& doc, int64_t min_df, bool sublinear) {
  std::map<std::string, int64_t> df;
  for (const std::string& d : docs) {
    const auto toks = Tokenize(d);
    for (const std::string& t : std::set<std::string>(toks.begin(), toks.end())) ++df[t];
  }
  std::map<std::string, double> counts;
  for (const std::string& t : Tokenize(doc)) counts[t] += 1.0;
  std::map<std::string, double> w;
  double norm = 0.0;
  for (const auto& [t, c] : counts) {
    auto it = df.find(t);
    if (it == df.end() || it->second < min_df) continue;
    const double n = static_cast<double>(docs.size());
    const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(it->second))) + 1.0;
    const double tf = sublinear ? 1.0 + std::log(c) : c;
    w[t] = tf * idf;
    norm += w[t] * w[t];
  }
  for (auto& [t, x] : w) x /= std::sqrt(norm);
  return w;
}

TEST_CASE("TF-IDF matches a brute-force oracle") {
  Rng rng(31);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> docs;
    const int64_t n_docs = rng.UniformInt(1, 12);
    for (int64_t d = 0; d < n_docs; ++d) {
      std::string doc;
      const int64_t len = rng.UniformInt(1, 10);
      for (int64_t k = 0; k < len; ++k) doc += words[rng.UniformIndex(words.size())] + " ";
      docs.push_back(doc);
    }
    TfIdfConfig config;
    config.min_df = rng.UniformInt(1, 2);
    config.sublinear_tf = rng.Bernoulli(0.5);
    TfIdfModel model;
    try {
      model = FitTfIdf(docs, config);
    } catch (const DataError&) {
      continue;  // every token filtered out by min_df
    }
    for (size_t i = 0; i < model.vocabulary.size(); ++i) {
      REQUIRE(model.vocabulary.document_frequency(i) <= model.vocabulary.n_documents());
      REQUIRE(model.idf[i] > 0.0);
    }
    const std::string probe = docs[rng.UniformIndex(docs.size())] + " unseen";
    const auto expected = OracleTfIdf(docs, probe, config.min_df, config.sublinear_tf);
    const FeatureVector v = TransformTfIdf(model, probe);
    REQUIRE(v.nonzeros() == expected.size());
    for (const auto& [t, w] : expected) CHECK_THAT(WeightOf(v, model, t), WithinAbs(w, 1e-12));
    for (size_t k = 1; k < v.indices().size(); ++k) CHECK(v.indices()[k - 1] < v.indices()[k]);
  }
}

TEST_CASE("model JSON round-trips") {
  const std::vector<std::string> texts = {"one two", "two three", "three four five"};
  TfIdfConfig c;
  c.sublinear_tf = true;
  const TfIdfModel m = FitTfIdf(texts, c);
  const TfIdfModel back = TfIdfModel::FromJson(m.ToJson());
  CHECK(back.vocabulary.tokens() == m.vocabulary.tokens());
  CHECK(back.idf == m.idf);
  CHECK(TransformTfIdf(back, "two five five") == TransformTfIdf(m, "two five five"));
  const auto featurizer = FeaturizerFromJson(TfIdfFeaturizer(m).ToJson(), nullptr);
  CHECK(featurizer->dimension() == m.vocabulary.size());
}

TEST_CASE("feature vector invariants") {
  CHECK_THROWS_AS(FeatureVector::Sparse(3, {1, 1}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(FeatureVector::Sparse(3, {2, 1}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(FeatureVector::Sparse(3, {3}, {1.0}), DataError);
  FeatureVector v = FeatureVector::Sparse(4, {0, 3}, {3.0, 4.0});
  v.NormalizeL2();
  CHECK_THAT(v.values()[0], WithinAbs(0.6, 1e-15));
  CHECK(v.ToDense() == std::vector<double>{0.6, 0.0, 0.0, 0.8});
  const std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  CHECK_THAT(v.Dot(w), WithinAbs(0.6 + 3.2, 1e-12));
  FeatureVector zero = FeatureVector::Zero(4);
  zero.NormalizeL2();
  CHECK(zero.Norm() == 0.0);
}

TEST_CASE("embed_batch against the mock") {
  MockServerOptions options;
  options.embed_dim = 16;
  MockModelServer server(options);
  server.Start();
  ServerEndpoint ep;
  ep.base_url = server.base_url();
  auto client = std::make_shared<ModelClient>(ep);

  const std::vector<std::string> texts = {"first post", "second one here", "third"};
  const auto vectors = EmbedBatch(texts, *client);
  REQUIRE(vectors.size() == 3);
  for (const FeatureVector& v : vectors) {
    CHECK(v.is_dense());
    CHECK(v.dimension() == 16);
    CHECK_THAT(v.Norm(), WithinAbs(1.0, 1e-12));
  }
  CHECK(EmbedBatch(std::span<const std::string>{}, *client).empty());

  std::vector<std::string> many;
  for (int i = 0; i < 150; ++i) many.push_back("post " + std::to_string(i));
  const auto batched = EmbedBatch(many, *client, 64);
  REQUIRE(batched.size() == 150);
  CHECK(batched[149] == EmbedBatch(std::span<const std::string>(&many[149], 1), *client)[0]);

  EmbeddingFeaturizer featurizer(client);
  CHECK(featurizer.dimension() == 0);
  const auto first = featurizer.Transform(texts);
  const int64_t before = server.stats().requests["/v1/embed"];
  CHECK(featurizer.Transform(texts) == first);
  CHECK(server.stats().requests["/v1/embed"] == before);
  CHECK(featurizer.dimension() == 16);
}

TEST_CASE("embed_batch rejects mismatched dimensions") {
  MockServerOptions options;
  options.mismatched_embed_dims = true;
  MockModelServer server(options);
  server.Start();
  ServerEndpoint ep;
  ep.base_url = server.base_url();
  ModelClient client(ep);
  const std::vector<std::string> texts = {"a", "b", "c"};
  CHECK_THROWS_AS(EmbedBatch(texts, client), DataError);
}

}  // namespace
}  // namespace risklens
