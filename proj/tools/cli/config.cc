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

#include "cli/config.h"

#include <fstream>

#include <fmt/format.h>

#include "risklens/error.h"

namespace risklens::cli {
namespace {

using nlohmann::json;

json FeatureDefaults() {
  return {{"kind", "tfidf"}, {"min_df", 1}, {"max_features", nullptr}, {"sublinear_tf", false}};
}

json ClassifierDefaults() {
  return {{"backend", "native"},      {"loss", "cross_entropy"}, {"learning_rate", nullptr},
          {"batch_size", nullptr},    {"epochs", nullptr},       {"weight_decay", nullptr},
          {"beta1", 0.9},             {"beta2", 0.999},          {"epsilon", 1e-8}};
}

json SelfTrainDefaults() {
  return {{"enabled", true},
          {"threshold", 0.33},
          {"iterations", 2},
          {"mode", "refresh"},
          {"final_full_assign", true},
          {"drop_synthetic_after_round0", true}};
}

// Copies `source` into `target`, rejecting keys the target does not have.
// Keys whose default is null accept any value.
void StrictMerge(json& target, const json& source, const std::string& path) {
  if (!source.is_object()) {
    throw ConfigError(fmt::format("config section '{}' must be an object", path.empty() ? "<root>" : path));
  }
  for (const auto& [key, value] : source.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    auto it = target.find(key);
    if (it == target.end()) throw ConfigError(fmt::format("unknown config key '{}'", where));
    if (it->is_object() && !it->empty()) {
      StrictMerge(*it, value, where);
    } else {
      *it = value;
    }
  }
}

std::string At(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

template <typename T>
T Get(const json& section, const char* key, const std::string& path) {
  try {
    return section.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config key '{}' has the wrong type", At(path, key)));
  }
}

template <typename T>
std::optional<T> GetOptional(const json& section, const char* key, const std::string& path) {
  if (section.at(key).is_null()) return std::nullopt;
  return Get<T>(section, key, path);
}

std::optional<std::filesystem::path> OptionalPath(const json& section, const char* key,
                                                  const std::string& path) {
  auto value = GetOptional<std::string>(section, key, path);
  if (!value || value->empty()) return std::nullopt;
  return std::filesystem::path(*value);
}

void ResolveRelative(json& value, const std::filesystem::path& base) {
  if (!value.is_string()) return;
  std::filesystem::path p(value.get<std::string>());
  if (!p.empty() && p.is_relative()) value = (base / p).lexically_normal().string();
}

ModelSettings ParseModel(const json& features, const json& classifier, const json& selftrain,
                         const std::string& prefix) {
  ModelSettings m;
  const std::string fpath = At(prefix, "features");
  const std::string kind = Get<std::string>(features, "kind", fpath);
  if (kind == "tfidf") {
    m.features = FeatureKind::kTfIdf;
  } else if (kind == "remote_embed") {
    m.features = FeatureKind::kRemoteEmbed;
  } else {
    throw ConfigError(fmt::format("{}.kind must be tfidf or remote_embed, got '{}'", fpath, kind));
  }
  m.tfidf.min_df = Get<int64_t>(features, "min_df", fpath);
  m.tfidf.max_features = GetOptional<int64_t>(features, "max_features", fpath);
  m.tfidf.sublinear_tf = Get<bool>(features, "sublinear_tf", fpath);
  if (m.tfidf.min_df < 1) throw ConfigError(fpath + ".min_df must be >= 1");
  if (m.tfidf.max_features && *m.tfidf.max_features < 1) {
    throw ConfigError(fpath + ".max_features must be >= 1");
  }

  const std::string cpath = At(prefix, "classifier");
  const std::string backend = Get<std::string>(classifier, "backend", cpath);
  if (backend == "native") {
    m.backend = Backend::kNative;
  } else if (backend == "remote") {
    m.backend = Backend::kRemote;
  } else {
    throw ConfigError(fmt::format("{}.backend must be native or remote, got '{}'", cpath, backend));
  }
  m.classifier = m.backend == Backend::kRemote ? ClassifierConfig::RemoteDefaults()
                                               : ClassifierConfig{};
  auto loss = ParseLoss(Get<std::string>(classifier, "loss", cpath));
  if (!loss) throw ConfigError(cpath + ".loss must be cross_entropy or hinge_ovr");
  m.classifier.loss = *loss;
  if (auto v = GetOptional<double>(classifier, "learning_rate", cpath)) m.classifier.learning_rate = *v;
  if (auto v = GetOptional<int64_t>(classifier, "batch_size", cpath)) m.classifier.batch_size = *v;
  if (auto v = GetOptional<int64_t>(classifier, "epochs", cpath)) m.classifier.epochs = *v;
  if (auto v = GetOptional<double>(classifier, "weight_decay", cpath)) m.classifier.weight_decay = *v;
  m.classifier.beta1 = Get<double>(classifier, "beta1", cpath);
  m.classifier.beta2 = Get<double>(classifier, "beta2", cpath);
  m.classifier.epsilon = Get<double>(classifier, "epsilon", cpath);
  m.classifier.Validate();

  const std::string spath = At(prefix, "selftrain");
  m.selftrain_enabled = Get<bool>(selftrain, "enabled", spath);
  m.selftrain.threshold = Get<double>(selftrain, "threshold", spath);
  m.selftrain.iterations = Get<int64_t>(selftrain, "iterations", spath);
  auto mode = ParseMode(Get<std::string>(selftrain, "mode", spath));
  if (!mode) throw ConfigError(spath + ".mode must be refresh or accumulate");
  m.selftrain.mode = *mode;
  m.selftrain.final_full_assign = Get<bool>(selftrain, "final_full_assign", spath);
  m.selftrain.drop_synthetic_after_round0 = Get<bool>(selftrain, "drop_synthetic_after_round0", spath);
  m.selftrain.classifier = m.classifier;
  m.selftrain.Validate();
  return m;
}

}  // namespace

bool RunConfig::needs_endpoint() const {
  return primary.remote() || (baseline && baseline->remote()) || remote_generator ||
         reference == ReferenceSource::kFewShot;
}

json DefaultConfigJson() {
  json stages = json::array();
  for (Stage stage : PreprocessConfig::Default().stages) stages.push_back(std::string(StageName(stage)));
  return {
      {"version", kConfigVersion},
      {"seed", 0},
      {"paths",
       {{"train", nullptr},
        {"unlabeled", nullptr},
        {"test", nullptr},
        {"output_dir", "risklens-out"},
        {"reference_labels", nullptr}}},
      {"preprocess",
       {{"enabled", true}, {"stages", stages}, {"acronym_table", nullptr}, {"emoji_table", nullptr}}},
      {"augment", {{"enabled", true}, {"cap_factor", 2.0}, {"generator", "native"}}},
      {"features", FeatureDefaults()},
      {"classifier", ClassifierDefaults()},
      {"selftrain", SelfTrainDefaults()},
      {"baseline",
       {{"enabled", false},
        {"features", FeatureDefaults()},
        {"classifier", ClassifierDefaults()},
        {"selftrain", SelfTrainDefaults()}}},
      {"reference", {{"source", "test_labels"}}},
      {"evaluation", {{"holdout_fraction", 0.2}, {"formats", {"text", "csv", "json", "svg"}}}},
      {"endpoint",
       {{"base_url", nullptr},
        {"model", ""},
        {"timeout_ms", 30000},
        {"max_retries", 3},
        {"max_concurrency", 4},
        {"backoff_initial_ms", 100},
        {"backoff_max_ms", 5000},
        {"auth_token_env", ""},
        {"audit", true}}},
  };
}

void ApplyOverride(json& config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json* node = &config;
  size_t start = 0;
  while (true) {
    const size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object() && !node->empty()) {
    throw ConfigError("cannot override the whole section '" + key + "'");
  }
  json value = json::parse(raw, nullptr, false);
  *node = value.is_discarded() ? json(raw) : value;
}

RunConfig LoadRunConfig(const std::optional<std::filesystem::path>& file,
                        const std::vector<std::string>& overrides) {
  json merged = DefaultConfigJson();
  std::filesystem::path base_dir = std::filesystem::current_path();
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open config file " + file->string());
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded()) throw ConfigError("config file " + file->string() + " is not valid JSON");
    if (parsed.is_object() && parsed.contains("version") && parsed["version"] != kConfigVersion) {
      throw ConfigError(fmt::format("unsupported config version {}", parsed["version"].dump()));
    }
    const std::filesystem::path file_dir =
        std::filesystem::absolute(*file).parent_path();
    if (parsed.is_object()) {
      if (parsed.contains("paths") && parsed["paths"].is_object()) {
        for (auto& [k, v] : parsed["paths"].items()) ResolveRelative(v, file_dir);
      }
      if (parsed.contains("preprocess") && parsed["preprocess"].is_object()) {
        for (const char* k : {"acronym_table", "emoji_table"}) {
          if (parsed["preprocess"].contains(k)) ResolveRelative(parsed["preprocess"][k], file_dir);
        }
      }
    }
    StrictMerge(merged, parsed, "");
  }
  for (const std::string& o : overrides) ApplyOverride(merged, o);
  return ParseRunConfig(merged, base_dir);
}

RunConfig ParseRunConfig(const json& merged, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.resolved = merged;
  if (Get<int>(merged, "version", "") != kConfigVersion) {
    throw ConfigError(fmt::format("unsupported config version {}", merged["version"].dump()));
  }
  c.seed = Get<uint64_t>(merged, "seed", "");

  const json& paths = merged.at("paths");
  auto abs = [&](std::optional<std::filesystem::path> p) -> std::optional<std::filesystem::path> {
    if (p && p->is_relative()) return (base_dir / *p).lexically_normal();
    return p;
  };
  c.train = abs(OptionalPath(paths, "train", "paths"));
  c.unlabeled = abs(OptionalPath(paths, "unlabeled", "paths"));
  c.test = abs(OptionalPath(paths, "test", "paths"));
  c.reference_labels = abs(OptionalPath(paths, "reference_labels", "paths"));
  c.output_dir = *abs(std::filesystem::path(Get<std::string>(paths, "output_dir", "paths")));

  const json& pre = merged.at("preprocess");
  c.preprocess_enabled = Get<bool>(pre, "enabled", "preprocess");
  c.preprocess = PreprocessConfig::Default();
  c.preprocess.stages.clear();
  for (const auto& name : Get<std::vector<std::string>>(pre, "stages", "preprocess")) {
    auto stage = ParseStage(name);
    if (!stage) throw ConfigError("unknown preprocess stage '" + name + "'");
    c.preprocess.stages.push_back(*stage);
  }
  if (auto p = abs(OptionalPath(pre, "acronym_table", "preprocess"))) {
    c.preprocess.acronym_table = LoadReplacementTable(*p);
  }
  if (auto p = abs(OptionalPath(pre, "emoji_table", "preprocess"))) {
    c.preprocess.emoji_table = LoadReplacementTable(*p);
  }
  c.preprocess.Validate();

  const json& aug = merged.at("augment");
  c.augment_enabled = Get<bool>(aug, "enabled", "augment");
  c.cap_factor = Get<double>(aug, "cap_factor", "augment");
  if (!(c.cap_factor >= 1.0)) throw ConfigError("augment.cap_factor must be >= 1");
  const std::string generator = Get<std::string>(aug, "generator", "augment");
  if (generator != "native" && generator != "remote") {
    throw ConfigError("augment.generator must be native or remote");
  }
  c.remote_generator = generator == "remote";

  c.primary = ParseModel(merged.at("features"), merged.at("classifier"), merged.at("selftrain"), "");
  const json& base = merged.at("baseline");
  if (Get<bool>(base, "enabled", "baseline")) {
    c.baseline = ParseModel(base.at("features"), base.at("classifier"), base.at("selftrain"), "baseline");
  }

  const std::string source = Get<std::string>(merged.at("reference"), "source", "reference");
  if (source == "none") {
    c.reference = ReferenceSource::kNone;
  } else if (source == "test_labels") {
    c.reference = ReferenceSource::kTestLabels;
  } else if (source == "label_file") {
    c.reference = ReferenceSource::kLabelFile;
    if (!c.reference_labels) throw ConfigError("reference.source label_file needs paths.reference_labels");
  } else if (source == "fewshot") {
    c.reference = ReferenceSource::kFewShot;
  } else {
    throw ConfigError("reference.source must be none, test_labels, label_file or fewshot");
  }

  const json& evaluation = merged.at("evaluation");
  c.holdout_fraction = Get<double>(evaluation, "holdout_fraction", "evaluation");
  if (!(c.holdout_fraction > 0.0 && c.holdout_fraction < 1.0)) {
    throw ConfigError("evaluation.holdout_fraction must lie in (0, 1)");
  }
  for (const auto& name : Get<std::vector<std::string>>(evaluation, "formats", "evaluation")) {
    auto format = ParseReportFormat(name);
    if (!format) throw ConfigError("unknown report format '" + name + "'");
    c.report_formats.push_back(*format);
  }

  const json& ep = merged.at("endpoint");
  if (auto url = GetOptional<std::string>(ep, "base_url", "endpoint"); url && !url->empty()) {
    EndpointSettings s;
    s.endpoint.base_url = *url;
    s.endpoint.model = Get<std::string>(ep, "model", "endpoint");
    s.endpoint.timeout = std::chrono::milliseconds(Get<int64_t>(ep, "timeout_ms", "endpoint"));
    s.endpoint.max_retries = Get<int64_t>(ep, "max_retries", "endpoint");
    s.endpoint.max_concurrency = Get<int64_t>(ep, "max_concurrency", "endpoint");
    s.endpoint.backoff_initial = std::chrono::milliseconds(Get<int64_t>(ep, "backoff_initial_ms", "endpoint"));
    s.endpoint.backoff_max = std::chrono::milliseconds(Get<int64_t>(ep, "backoff_max_ms", "endpoint"));
    s.auth_token_env = Get<std::string>(ep, "auth_token_env", "endpoint");
    s.audit = Get<bool>(ep, "audit", "endpoint");
    if (!s.auth_token_env.empty()) {
      if (const char* token = std::getenv(s.auth_token_env.c_str())) s.endpoint.auth_token = token;
    }
    s.endpoint.Validate();
    c.endpoint = std::move(s);
  }
  if (c.needs_endpoint() && !c.endpoint) {
    throw ConfigError("remote components are configured but endpoint.base_url is not set");
  }
  return c;
}

void ValidatePaths(const RunConfig& config) {
  auto check = [](const std::optional<std::filesystem::path>& p, const char* key) {
    if (p && !std::filesystem::exists(*p)) {
      throw ConfigError(fmt::format("paths.{} does not exist: {}", key, p->string()));
    }
  };
  check(config.train, "train");
  check(config.unlabeled, "unlabeled");
  check(config.test, "test");
  check(config.reference_labels, "reference_labels");
}

}  // namespace risklens::cli
