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

#include "cli/pipeline.h"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "risklens/classifier.h"
#include "risklens/error.h"
#include "risklens/features.h"
#include "risklens/preprocess.h"
#include "risklens/rng.h"
#include "risklens/version.h"

namespace risklens::cli {
namespace {

using nlohmann::json;

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json Evaluation(const AgreementReport& agreement, ReferenceSource source) {
  if (source == ReferenceSource::kTestLabels) {
    json j = agreement.metrics.ToJson();
    j["kind"] = "metrics";
    return j;
  }
  json j = agreement.ToJson();
  j["kind"] = "agreement";
  return j;
}

std::string Render(const AgreementReport& agreement, ReferenceSource source, ReportFormat format) {
  return source == ReferenceSource::kTestLabels ? RenderReport(agreement.metrics, format)
                                                : RenderReport(agreement, format);
}

void WriteRenderings(const std::filesystem::path& dir, const std::string& stem,
                     const AgreementReport& agreement, const RunConfig& config) {
  for (ReportFormat format : config.report_formats) {
    WriteFile(dir / (stem + std::string(ReportFormatExtension(format))),
              Render(agreement, config.reference, format));
  }
}

}  // namespace

Session OpenSession(const RunConfig& config, bool probe) {
  Session session;
  if (!config.endpoint) return session;
  if (config.endpoint->audit) {
    std::filesystem::create_directories(config.output_dir);
    session.audit = std::make_shared<AuditLog>(config.output_dir / "audit.jsonl");
  }
  session.client = std::make_shared<ModelClient>(config.endpoint->endpoint, session.audit);
  if (probe && config.needs_endpoint()) {
    try {
      session.client->Health();
    } catch (const Error& e) {
      throw TransportError(fmt::format("model endpoint {} is not reachable: {}",
                                       config.endpoint->endpoint.base_url, e.what()));
    }
  }
  return session;
}

Inputs LoadInputs(const RunConfig& config) {
  if (!config.train) throw ConfigError("paths.train is required");
  Inputs inputs;
  inputs.train = LoadCorpus(*config.train);
  if (config.unlabeled) inputs.unlabeled = LoadCorpus(*config.unlabeled);
  if (config.test) inputs.test = LoadCorpus(*config.test);
  return inputs;
}

json CorpusStats(const Corpus& corpus) {
  const ClassCounts counts = CountClasses(corpus);
  json by_class = json::object();
  for (RiskLabel label : kAllLabels) by_class[std::string(LabelName(label))] = counts[label];
  return {{"size", corpus.size()},
          {"labeled", counts.total},
          {"unlabeled", static_cast<int64_t>(corpus.size()) - counts.total},
          {"counts", by_class}};
}

PreprocessOutcome Preprocess(const Corpus& corpus, const RunConfig& config) {
  PreprocessOutcome out;
  if (!config.preprocess_enabled) {
    out.corpus = corpus;
    return out;
  }
  out.corpus = NormalizeCorpus(corpus, config.preprocess, &out.kept_raw);
  return out;
}

AugmentOutcome Augment(const Corpus& corpus, const RunConfig& config, const Session& session) {
  AugmentOutcome out;
  out.corpus = corpus;
  out.generator = config.remote_generator ? "remote" : "native";
  if (!config.augment_enabled) return out;
  out.plan = PlanAugmentation(CountClasses(corpus), config.cap_factor);
  if (out.plan->nothing_to_do()) return out;
  std::unique_ptr<TextGenerator> generator;
  if (config.remote_generator) {
    generator = std::make_unique<RemoteTextGenerator>(session.client);
  } else {
    generator = std::make_unique<NativeEditGenerator>();
  }
  out.corpus = ApplyPlan(corpus, *out.plan, *generator, DeriveSeed(config.seed, "augment"));
  return out;
}

TrainOutcome Train(const ModelSettings& settings, const Corpus& labeled, const Corpus& pool,
                   const RunConfig& config, const Session& session) {
  std::unique_ptr<ClassifierFactory> factory;
  if (settings.backend == Backend::kRemote) {
    factory = std::make_unique<RemoteClassifierFactory>(session.client);
  } else {
    std::shared_ptr<const Featurizer> featurizer;
    if (settings.features == FeatureKind::kRemoteEmbed) {
      featurizer = std::make_shared<EmbeddingFeaturizer>(session.client);
    } else {
      std::vector<std::string> texts = Texts(labeled);
      for (const Post& post : pool) texts.push_back(post.text);
      featurizer = std::make_shared<TfIdfFeaturizer>(FitTfIdf(texts, settings.tfidf));
    }
    factory = std::make_unique<NativeClassifierFactory>(std::move(featurizer));
  }

  SelfTrainConfig st = settings.selftrain;
  st.classifier = settings.classifier;
  st.seed = DeriveSeed(config.seed, "selftrain");
  if (!settings.selftrain_enabled) {
    st.iterations = 0;
    st.final_full_assign = false;
  }

  TrainOutcome out;
  out.result = RunSelfTraining(labeled, pool, *factory, st);
  out.artifact = {
      {"format", kModelFormat},
      {"version", kArtifactVersion},
      {"preprocess", config.preprocess_enabled ? config.preprocess.ToFullJson() : json(nullptr)},
      {"model", out.result.model->ToJson()},
  };
  return out;
}

LoadedModel ModelFromArtifact(const json& artifact, const Session& session) {
  if (!artifact.is_object() || artifact.value("format", "") != kModelFormat) {
    throw DataError("not a risklens model artifact");
  }
  if (artifact.value("version", 0) != kArtifactVersion) {
    throw DataError(fmt::format("unsupported model artifact version {}", artifact["version"].dump()));
  }
  LoadedModel loaded;
  if (artifact.contains("preprocess") && !artifact["preprocess"].is_null()) {
    loaded.preprocess = PreprocessConfig::FromFullJson(artifact["preprocess"]);
  }
  loaded.model = ModelFromJson(artifact.at("model"), session.client);
  return loaded;
}

LoadedModel LoadModelArtifact(const std::filesystem::path& path, const Session& session) {
  json artifact = json::parse(ReadFileBytes(path), nullptr, false);
  if (artifact.is_discarded()) throw DataError(path.string() + " is not valid JSON");
  return ModelFromArtifact(artifact, session);
}

std::vector<std::pair<std::string, RiskLabel>> Predict(const LoadedModel& model,
                                                      const Corpus& posts) {
  const Corpus normalized = model.preprocess ? NormalizeCorpus(posts, *model.preprocess) : posts;
  const std::vector<std::string> texts = Texts(normalized);
  const std::vector<ProbDistribution> dists =
      texts.empty() ? std::vector<ProbDistribution>{} : model.model->PredictProba(texts);
  if (dists.size() != texts.size()) throw TrainingError("model returned the wrong number of predictions");
  std::vector<std::pair<std::string, RiskLabel>> out;
  out.reserve(posts.size());
  for (size_t i = 0; i < posts.size(); ++i) out.emplace_back(posts[i].id, dists[i].Argmax());
  return out;
}

std::map<std::string, RiskLabel, std::less<>> ToMap(
    const std::vector<std::pair<std::string, RiskLabel>>& labels) {
  return {labels.begin(), labels.end()};
}

std::optional<Reference> ResolveReference(const RunConfig& config, const Inputs& inputs,
                                          const Corpus& test, const Session& session) {
  Reference ref;
  switch (config.reference) {
    case ReferenceSource::kNone:
      return std::nullopt;
    case ReferenceSource::kTestLabels:
      ref.corpus = SplitLabeledUnlabeled(test).first;
      if (ref.corpus.empty()) {
        throw EvalInputError("the test corpus has no labels; choose another reference.source");
      }
      ref.summary = {{"source", "test_labels"}, {"scored", ref.corpus.size()}};
      return ref;
    case ReferenceSource::kLabelFile: {
      const auto labels = LoadLabelFile(*config.reference_labels);
      for (const auto& [id, label] : labels) {
        if (!test.Contains(id)) {
          throw EvalInputError("reference id '" + id + "' is not in the test corpus");
        }
      }
      for (const Post& post : test) {
        auto it = labels.find(post.id);
        if (it == labels.end()) continue;
        Post labeled = post;
        labeled.label = it->second;
        ref.corpus.Add(std::move(labeled));
      }
      if (ref.corpus.empty()) throw EvalInputError("the reference label file is empty");
      ref.summary = {{"source", "label_file"}, {"scored", ref.corpus.size()}};
      return ref;
    }
    case ReferenceSource::kFewShot: {
      const Corpus originals =
          FilterByOrigin(SplitLabeledUnlabeled(inputs.train).first, Origin::kOriginal);
      const std::vector<Post> examples = PickFewShotExamples(originals);
      FewShotResult result = LabelPostsFewShot(test, examples, *session.client);
      for (const auto& [id, label] : result.labels) {
        Post post = *test.Find(id);
        post.label = label;
        ref.corpus.Add(std::move(post));
      }
      if (ref.corpus.empty()) throw DataError("few-shot labeling produced no usable labels");
      json examples_json = json::array();
      for (const Post& e : examples) examples_json.push_back(e.id);
      ref.summary = {{"source", "fewshot"},
                     {"examples", examples_json},
                     {"requests", result.requests},
                     {"scored", ref.corpus.size()},
                     {"failures", result.failures.size()}};
      ref.fewshot = std::move(result);
      return ref;
    }
  }
  return std::nullopt;
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("failed writing " + path.string());
}

void WriteJson(const std::filesystem::path& path, const json& j) {
  WriteFile(path, j.dump(2) + "\n");
}

void WriteLabels(const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, RiskLabel>>& labels) {
  std::ostringstream out;
  WriteLabelFile(labels, out);
  WriteFile(path, out.str());
}

void WriteFewShotFailures(const std::filesystem::path& path, const FewShotResult& result) {
  json failures = json::array();
  for (const FewShotFailure& f : result.failures) {
    failures.push_back({{"id", f.id}, {"reason", f.reason}});
  }
  WriteJson(path, {{"requests", result.requests},
                   {"labeled", result.labels.size()},
                   {"failures", failures}});
}

json Manifest(const std::string& command, const RunConfig& config) {
  json inputs = json::object();
  auto add = [&](const char* key, const std::optional<std::filesystem::path>& p) {
    if (!p) return;
    inputs[key] = {{"path", p->string()}, {"sha256", Sha256Hex(ReadFileBytes(*p))}};
  };
  add("train", config.train);
  add("unlabeled", config.unlabeled);
  add("test", config.test);
  add("reference_labels", config.reference_labels);
  return {
      {"format", "risklens.manifest"},
      {"version", kArtifactVersion},
      {"command", command},
      {"seed", config.seed},
      {"components", ComponentVersions()},
      {"config", config.resolved},
      {"endpoint", config.endpoint ? config.endpoint->endpoint.ToJson() : json(nullptr)},
      {"inputs", inputs},
  };
}

PipelineOutcome RunPipeline(const RunConfig& config) {
  ValidatePaths(config);
  const Session session = OpenSession(config, /*probe=*/true);
  const Inputs inputs = LoadInputs(config);
  const std::filesystem::path& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  PipelineOutcome outcome;

  auto [labeled, train_unlabeled] = SplitLabeledUnlabeled(inputs.train);
  if (labeled.empty()) throw DataError("the training corpus has no labeled posts");
  Corpus test;
  const bool holdout = !inputs.test.has_value();
  if (holdout) {
    auto split = StratifiedHoldout(labeled, config.holdout_fraction, DeriveSeed(config.seed, "holdout"));
    labeled = std::move(split.first);
    test = std::move(split.second);
    if (test.empty()) throw DataError("the holdout split is empty; supply paths.test");
  } else {
    test = *inputs.test;
  }
  const Corpus pool = Concat(train_unlabeled, inputs.unlabeled);

  json report = {{"format", kReportFormat}, {"version", kArtifactVersion}, {"seed", config.seed}};
  report["stats"] = {{"train", CorpusStats(inputs.train)},
                     {"unlabeled_file", CorpusStats(inputs.unlabeled)},
                     {"test", CorpusStats(test)},
                     {"test_is_holdout", holdout},
                     {"labeled_for_training", labeled.size()},
                     {"pool_size", pool.size()}};

  const PreprocessOutcome pre_labeled = Preprocess(labeled, config);
  const PreprocessOutcome pre_pool = Preprocess(pool, config);
  report["preprocess"] = {
      {"enabled", config.preprocess_enabled},
      {"config", config.preprocess.ToJson()},
      {"kept_raw", pre_labeled.kept_raw + pre_pool.kept_raw},
  };
  if (pre_labeled.kept_raw + pre_pool.kept_raw > 0) {
    outcome.notices.push_back(fmt::format("{} posts normalized to blank text and kept their raw text",
                                          pre_labeled.kept_raw + pre_pool.kept_raw));
  }

  const AugmentOutcome aug = Augment(pre_labeled.corpus, config, session);
  report["augmentation"] = {
      {"enabled", config.augment_enabled},
      {"generator", aug.generator},
      {"plan", aug.plan ? aug.plan->ToJson() : json(nullptr)},
      {"labeled_after", CountClasses(aug.corpus).total},
  };
  if (aug.plan && aug.plan->nothing_to_do()) {
    outcome.notices.push_back("augmentation: classes already balanced, nothing to do");
  }
  SaveCorpus(aug.corpus, dir / "augmented.jsonl", CorpusFormat::kJsonl);

  struct Scored {
    std::string name;
    TrainOutcome trained;
    std::vector<std::pair<std::string, RiskLabel>> predictions;
  };
  std::vector<Scored> runs;
  runs.push_back({"primary", Train(config.primary, aug.corpus, pre_pool.corpus, config, session), {}});
  if (config.baseline) {
    runs.push_back({"baseline", Train(*config.baseline, aug.corpus, pre_pool.corpus, config, session), {}});
  }

  for (Scored& run : runs) {
    const std::string prefix = run.name == "primary" ? "" : run.name + "_";
    WriteJson(dir / (prefix + "model.json"), run.trained.artifact);
    WriteJson(dir / (prefix + "selftrain_report.json"), run.trained.result.report.ToJson());
    SaveCorpus(run.trained.result.pseudo_labels, dir / (prefix + "pseudo_labels.jsonl"),
               CorpusFormat::kJsonl);
    LoadedModel loaded;
    if (config.preprocess_enabled) loaded.preprocess = config.preprocess;
    loaded.model = std::move(run.trained.result.model);
    run.predictions = Predict(loaded, test);
    WriteLabels(dir / (prefix + "predictions.csv"), run.predictions);
  }

  const std::optional<Reference> reference = ResolveReference(config, inputs, test, session);
  if (reference && reference->fewshot) {
    WriteLabels(dir / "reference_labels.csv", reference->fewshot->labels);
    WriteFewShotFailures(dir / "reference_labels.failures.json", *reference->fewshot);
    if (!reference->fewshot->failures.empty()) {
      outcome.notices.push_back(fmt::format("few-shot labeling failed for {} of {} posts; see {}",
                                            reference->fewshot->failures.size(), test.size(),
                                            (dir / "reference_labels.failures.json").string()));
    }
  }
  report["reference"] = reference ? reference->summary : json({{"source", "none"}});

  std::optional<double> primary_f1;
  for (Scored& run : runs) {
    json section = {{"selftrain", run.trained.result.report.ToJson()},
                    {"predictions", run.predictions.size()}};
    if (reference) {
      const AgreementReport agreement = ComputeAgreement(reference->corpus, ToMap(run.predictions));
      section["evaluation"] = Evaluation(agreement, config.reference);
      const std::string prefix = run.name == "primary" ? "" : run.name + "_";
      WriteRenderings(dir, prefix + "metrics", agreement, config);
      if (run.name == "primary") {
        primary_f1 = agreement.metrics.weighted_f1;
      } else if (primary_f1) {
        report["weighted_f1_delta"] = *primary_f1 - agreement.metrics.weighted_f1;
      }
    } else {
      section["evaluation"] = nullptr;
    }
    report[run.name] = std::move(section);
  }
  if (!config.baseline) report["baseline"] = nullptr;

  WriteJson(dir / "report.json", report);
  WriteJson(dir / "manifest.json", Manifest("pipeline", config));
  outcome.report = std::move(report);
  return outcome;
}

}  // namespace risklens::cli
