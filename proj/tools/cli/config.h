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

#ifndef RISKLENS_TOOLS_CLI_CONFIG_H_
#define RISKLENS_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/classifier.h"
#include "risklens/eval.h"
#include "risklens/features.h"
#include "risklens/preprocess.h"
#include "risklens/remote.h"
#include "risklens/selftrain.h"

namespace risklens::cli {

inline constexpr int kConfigVersion = 1;

enum class FeatureKind { kTfIdf, kRemoteEmbed };
enum class Backend { kNative, kRemote };
enum class ReferenceSource { kNone, kTestLabels, kLabelFile, kFewShot };

// One featurizer + classifier + self-training setup.
struct ModelSettings {
  FeatureKind features = FeatureKind::kTfIdf;
  TfIdfConfig tfidf;
  Backend backend = Backend::kNative;
  ClassifierConfig classifier;
  bool selftrain_enabled = true;
  SelfTrainConfig selftrain;

  bool remote() const {
    return features == FeatureKind::kRemoteEmbed || backend == Backend::kRemote;
  }
};

struct EndpointSettings {
  ServerEndpoint endpoint;
  std::string auth_token_env;
  bool audit = true;
};

struct RunConfig {
  uint64_t seed = 0;

  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> unlabeled;
  std::optional<std::filesystem::path> test;
  std::filesystem::path output_dir = "risklens-out";
  std::optional<std::filesystem::path> reference_labels;

  bool preprocess_enabled = true;
  PreprocessConfig preprocess;

  bool augment_enabled = true;
  double cap_factor = 2.0;
  bool remote_generator = false;

  ModelSettings primary;
  std::optional<ModelSettings> baseline;

  ReferenceSource reference = ReferenceSource::kTestLabels;

  // Share of the labeled training posts held out for testing when no test
  // corpus is given.
  double holdout_fraction = 0.2;
  std::vector<ReportFormat> report_formats;

  std::optional<EndpointSettings> endpoint;

  // Merged configuration (defaults, file, then overrides), echoed into the
  // manifest.
  nlohmann::json resolved;

  bool needs_endpoint() const;
};

// The full default configuration document. Every accepted key appears here.
nlohmann::json DefaultConfigJson();

// Applies "a.b.c=value". The value is parsed as JSON when it parses and is
// taken as a string otherwise. Throws ConfigError for unknown keys.
void ApplyOverride(nlohmann::json& config, const std::string& assignment);

// Defaults, then `file` (if any), then overrides. Unknown keys anywhere are
// rejected with ConfigError naming the dotted path. Relative paths in the
// file resolve against the file's directory.
RunConfig LoadRunConfig(const std::optional<std::filesystem::path>& file,
                        const std::vector<std::string>& overrides);

RunConfig ParseRunConfig(const nlohmann::json& merged,
                         const std::filesystem::path& base_dir);

// Checks that every referenced input path exists.
void ValidatePaths(const RunConfig& config);

}  // namespace risklens::cli

#endif  // RISKLENS_TOOLS_CLI_CONFIG_H_
