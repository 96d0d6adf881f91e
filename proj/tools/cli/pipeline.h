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

#ifndef RISKLENS_TOOLS_CLI_PIPELINE_H_
#define RISKLENS_TOOLS_CLI_PIPELINE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.h"
#include "risklens/augment.h"
#include "risklens/corpus.h"
#include "risklens/eval.h"
#include "risklens/fewshot.h"
#include "risklens/remote.h"
#include "risklens/selftrain.h"

namespace risklens::cli {

inline constexpr char kModelFormat[] = "risklens.model";
inline constexpr char kReportFormat[] = "risklens.report";
inline constexpr int kArtifactVersion = 1;

// Shared remote client and audit sink for one command.
struct Session {
  std::shared_ptr<AuditLog> audit;
  std::shared_ptr<const ModelClient> client;  // null without an endpoint
};

// Builds the client when the config names an endpoint. With `probe` set and
// remote components configured, an unreachable endpoint fails here with a
// TransportError before any work starts.
Session OpenSession(const RunConfig& config, bool probe);

// Training posts (labeled plus unlabeled), the extra unlabeled file, and the
// test corpus, loaded from the configured paths.
struct Inputs {
  Corpus train;
  Corpus unlabeled;
  std::optional<Corpus> test;
};
Inputs LoadInputs(const RunConfig& config);

nlohmann::json CorpusStats(const Corpus& corpus);

struct PreprocessOutcome {
  Corpus corpus;
  size_t kept_raw = 0;
};
PreprocessOutcome Preprocess(const Corpus& corpus, const RunConfig& config);

struct AugmentOutcome {
  std::optional<AugmentationPlan> plan;  // unset when augmentation is off
  Corpus corpus;                         // input plus synthetic posts
  std::string generator;
};
AugmentOutcome Augment(const Corpus& corpus, const RunConfig& config,
                       const Session& session);

struct TrainOutcome {
  SelfTrainResult result;
  // Self-contained artifact: preprocessing plus the fitted model.
  nlohmann::json artifact;
};

// Fits `settings` on the labeled posts with self-training over `pool`. The
// TF-IDF vocabulary is fitted on the labeled and pool texts together.
TrainOutcome Train(const ModelSettings& settings, const Corpus& labeled,
                   const Corpus& pool, const RunConfig& config,
                   const Session& session);

// A model artifact loaded back for prediction.
struct LoadedModel {
  std::optional<PreprocessConfig> preprocess;
  std::unique_ptr<ProbabilisticModel> model;
};
LoadedModel LoadModelArtifact(const std::filesystem::path& path,
                              const Session& session);
LoadedModel ModelFromArtifact(const nlohmann::json& artifact, const Session& session);

// Argmax predictions on raw posts, id -> label, corpus order.
std::vector<std::pair<std::string, RiskLabel>> Predict(const LoadedModel& model,
                                                      const Corpus& posts);

std::map<std::string, RiskLabel, std::less<>> ToMap(
    const std::vector<std::pair<std::string, RiskLabel>>& labels);

// Reference labeling resolved from the configured source.
struct Reference {
  Corpus corpus;  // labeled posts that are scored
  nlohmann::json summary;
  std::optional<FewShotResult> fewshot;
};
std::optional<Reference> ResolveReference(const RunConfig& config, const Inputs& inputs,
                                          const Corpus& test, const Session& session);

// Writes `contents` to `path`, creating parent directories.
void WriteFile(const std::filesystem::path& path, const std::string& contents);
void WriteJson(const std::filesystem::path& path, const nlohmann::json& j);
void WriteLabels(const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, RiskLabel>>& labels);
void WriteFewShotFailures(const std::filesystem::path& path, const FewShotResult& result);

// Config echo, component versions, seed, and input digests.
nlohmann::json Manifest(const std::string& command, const RunConfig& config);

struct PipelineOutcome {
  nlohmann::json report;
  std::vector<std::string> notices;
};

// stats -> preprocess -> augment -> self-training -> predict -> evaluate,
// writing every artifact under config.output_dir.
PipelineOutcome RunPipeline(const RunConfig& config);

}  // namespace risklens::cli

#endif  // RISKLENS_TOOLS_CLI_PIPELINE_H_
