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

#include "cli/commands.h"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/config.h"
#include "cli/pipeline.h"
#include "risklens/error.h"
#include "risklens/synthetic.h"
#include "risklens/version.h"

namespace risklens::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flags shared by every config-driven command.
struct CommonFlags {
  std::string config;
  std::vector<std::string> sets;
  std::optional<uint64_t> seed;
  std::string output_dir;
  std::string train;
  std::string unlabeled;
  std::string test;
  std::string endpoint;

  void Register(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "Override a config key, e.g. --set selftrain.threshold=0.5")
        ->take_all();
    app->add_option("--seed", seed, "Top-level seed");
    app->add_option("-o,--output-dir", output_dir, "Directory for artifacts");
    app->add_option("--train", train, "Training corpus (labeled and unlabeled posts)");
    app->add_option("--unlabeled", unlabeled, "Additional unlabeled corpus");
    app->add_option("--test", test, "Test corpus");
    app->add_option("--endpoint", endpoint, "Model endpoint base URL");
  }

  RunConfig Load() const {
    std::vector<std::string> overrides = sets;
    auto path_flag = [&](const char* key, const std::string& value) {
      if (!value.empty()) overrides.push_back(std::string(key) + "=" + json(value).dump());
    };
    path_flag("paths.train", train);
    path_flag("paths.unlabeled", unlabeled);
    path_flag("paths.test", test);
    path_flag("paths.output_dir", output_dir);
    path_flag("endpoint.base_url", endpoint);
    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    std::optional<fs::path> file;
    if (!config.empty()) file = config;
    return LoadRunConfig(file, overrides);
  }
};

std::string PlanTable(const AugmentationPlan& plan) {
  std::string s = fmt::format("{:<10} {:>9} {:>7} {:>9}\n", "class", "original", "target", "generate");
  for (RiskLabel label : kAllLabels) {
    const ClassPlan& c = plan[label];
    s += fmt::format("{:<10} {:>9} {:>7} {:>9}\n", LabelName(label), c.original, c.target,
                     c.to_generate);
  }
  int64_t original = 0;
  for (const ClassPlan& c : plan.classes) original += c.original;
  s += fmt::format("{:<10} {:>9} {:>7} {:>9}\n", "total", original, plan.total_target(),
                   plan.total_to_generate());
  return s;
}

int CmdStats(const std::string& path, bool as_json, std::ostream& out) {
  const Corpus corpus = LoadCorpus(path);
  if (corpus.empty()) throw DataError(path + ": corpus is empty");
  const json stats = CorpusStats(corpus);
  if (as_json) {
    out << stats.dump(2) << "\n";
    return kExitOk;
  }
  out << fmt::format("{:<10} {:>7}\n", "class", "count");
  for (RiskLabel label : kAllLabels) {
    out << fmt::format("{:<10} {:>7}\n", LabelName(label),
                       stats["counts"][std::string(LabelName(label))].get<int64_t>());
  }
  out << fmt::format("{:<10} {:>7}\n", "labeled", stats["labeled"].get<int64_t>());
  out << fmt::format("{:<10} {:>7}\n", "unlabeled", stats["unlabeled"].get<int64_t>());
  out << fmt::format("{:<10} {:>7}\n", "total", stats["size"].get<int64_t>());
  return kExitOk;
}

int CmdAugment(const CommonFlags& flags, const std::string& output, std::ostream& out) {
  RunConfig config = flags.Load();
  config.augment_enabled = true;
  ValidatePaths(config);
  const Session session = OpenSession(config, /*probe=*/config.remote_generator);
  if (!config.train) throw ConfigError("augment needs a training corpus (--train or paths.train)");
  const Corpus corpus = LoadCorpus(*config.train);
  const AugmentOutcome aug = Augment(corpus, config, session);
  const fs::path target = output.empty() ? config.output_dir / "augmented.jsonl" : fs::path(output);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  SaveCorpus(aug.corpus, target);
  WriteJson(config.output_dir / "manifest.json", Manifest("augment", config));
  out << PlanTable(*aug.plan);
  if (aug.plan->nothing_to_do()) out << "classes already balanced, nothing to do\n";
  out << fmt::format("wrote {} posts ({} labeled) to {}\n", aug.corpus.size(),
                     CountClasses(aug.corpus).total, target.string());
  return kExitOk;
}

int CmdSelfTrain(const CommonFlags& flags, std::ostream& out) {
  const RunConfig config = flags.Load();
  ValidatePaths(config);
  const Session session = OpenSession(config, /*probe=*/true);
  const Inputs inputs = LoadInputs(config);
  auto [labeled, train_unlabeled] = SplitLabeledUnlabeled(inputs.train);
  const Corpus pool = Concat(train_unlabeled, inputs.unlabeled);
  const PreprocessOutcome pre_labeled = Preprocess(labeled, config);
  const PreprocessOutcome pre_pool = Preprocess(pool, config);
  const AugmentOutcome aug = Augment(pre_labeled.corpus, config, session);
  TrainOutcome trained = Train(config.primary, aug.corpus, pre_pool.corpus, config, session);

  const fs::path& dir = config.output_dir;
  fs::create_directories(dir);
  WriteJson(dir / "model.json", trained.artifact);
  WriteJson(dir / "selftrain_report.json", trained.result.report.ToJson());
  SaveCorpus(trained.result.pseudo_labels, dir / "pseudo_labels.jsonl", CorpusFormat::kJsonl);
  WriteJson(dir / "manifest.json", Manifest("selftrain", config));

  out << fmt::format("{:<10} {:<13} {:>6} {:>9} {:>9}\n", "fit", "kind", "pool", "accepted",
                     "train");
  for (const IterationRecord& r : trained.result.report.records) {
    out << fmt::format("{:<10} {:<13} {:>6} {:>9} {:>9}\n", r.iteration, r.kind, r.pool_size,
                       r.accepted_count, r.training_set_size);
  }
  out << fmt::format("final training set size {}\n", trained.result.report.final_training_set_size);
  out << fmt::format("wrote {}\n", (dir / "model.json").string());
  return kExitOk;
}

struct EvalFlags {
  std::string model;
  std::string test;
  std::string predictions;
  std::string reference;
  std::string format = "text";
  std::string output;
  std::string config;
  std::vector<std::string> sets;
  std::string endpoint;
};

int CmdEval(const EvalFlags& flags, std::ostream& out) {
  auto format = ParseReportFormat(flags.format);
  if (!format) throw ConfigError("unknown --format '" + flags.format + "'");

  std::optional<Corpus> test;
  if (!flags.test.empty()) test = LoadCorpus(flags.test);

  std::map<std::string, RiskLabel, std::less<>> predictions;
  if (!flags.predictions.empty()) {
    if (!flags.model.empty()) throw ConfigError("give either --predictions or --model, not both");
    predictions = LoadLabelFile(flags.predictions);
  } else if (!flags.model.empty()) {
    if (!test) throw ConfigError("--model needs --test");
    CommonFlags common;
    common.config = flags.config;
    common.sets = flags.sets;
    common.endpoint = flags.endpoint;
    const RunConfig config = common.Load();
    const Session session = OpenSession(config, /*probe=*/false);
    const LoadedModel model = LoadModelArtifact(flags.model, session);
    predictions = ToMap(Predict(model, *test));
  } else {
    throw ConfigError("eval needs --predictions or --model with --test");
  }

  std::string rendered;
  if (!flags.reference.empty()) {
    const auto labels = LoadLabelFile(flags.reference);
    Corpus reference;
    for (const auto& [id, label] : labels) {
      const Post* post = test ? test->Find(id) : nullptr;
      reference.Add({id, post ? post->text : id, label, Origin::kOriginal});
    }
    if (reference.empty()) throw EvalInputError(flags.reference + ": no reference labels");
    rendered = RenderReport(ComputeAgreement(reference, predictions), *format);
  } else {
    if (!test) throw ConfigError("eval needs --reference or a labeled --test corpus");
    const Corpus reference = SplitLabeledUnlabeled(*test).first;
    if (reference.empty()) throw EvalInputError(flags.test + ": the test corpus has no labels");
    rendered = RenderReport(ComputeAgreement(reference, predictions).metrics, *format);
  }
  if (flags.output.empty()) {
    out << rendered;
  } else {
    WriteFile(flags.output, rendered);
  }
  return kExitOk;
}

int CmdLabel(const CommonFlags& flags, const std::string& output, std::ostream& out,
             std::ostream& err) {
  RunConfig config = flags.Load();
  if (!config.endpoint) throw ConfigError("label needs a model endpoint (--endpoint or endpoint.base_url)");
  if (!config.test) throw ConfigError("label needs the posts to label (--test or paths.test)");
  if (!config.train) throw ConfigError("label needs labeled examples (--train or paths.train)");
  config.reference = ReferenceSource::kFewShot;
  ValidatePaths(config);
  const Session session = OpenSession(config, /*probe=*/true);
  const Inputs inputs = LoadInputs(config);
  const std::optional<Reference> reference = ResolveReference(config, inputs, *inputs.test, session);
  const FewShotResult& result = *reference->fewshot;

  fs::path target = output.empty() ? config.output_dir / "reference_labels.csv" : fs::path(output);
  fs::path failures = target;
  failures.replace_extension(".failures.json");
  WriteLabels(target, result.labels);
  WriteFewShotFailures(failures, result);
  WriteJson(config.output_dir / "manifest.json", Manifest("label", config));
  out << fmt::format("labeled {} of {} posts with {} requests; wrote {}\n", result.labels.size(),
                     inputs.test->size(), result.requests, target.string());
  if (!result.failures.empty()) {
    err << fmt::format("warning: {} posts could not be labeled; see {}\n", result.failures.size(),
                       failures.string());
  }
  return kExitOk;
}

int CmdPipeline(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  const RunConfig config = flags.Load();
  const PipelineOutcome outcome = RunPipeline(config);
  for (const std::string& notice : outcome.notices) err << "note: " << notice << "\n";
  for (const char* name : {"primary", "baseline"}) {
    const json& section = outcome.report[name];
    if (section.is_null() || section["evaluation"].is_null()) continue;
    const json& evaluation = section["evaluation"];
    const json& metrics = evaluation["kind"] == "metrics" ? evaluation : evaluation["metrics"];
    out << fmt::format("{:<9} weighted_f1 {:.4f}  macro_f1 {:.4f}  accuracy {:.4f}\n", name,
                       metrics["weighted_f1"].get<double>(), metrics["macro_f1"].get<double>(),
                       metrics["accuracy"].get<double>());
  }
  out << fmt::format("wrote {}\n", (config.output_dir / "report.json").string());
  return kExitOk;
}

std::array<int64_t, kNumLabels> ParseCounts(const std::string& text, const char* flag) {
  std::array<int64_t, kNumLabels> counts{};
  std::stringstream in(text);
  std::string piece;
  size_t i = 0;
  while (std::getline(in, piece, ',')) {
    if (i == kNumLabels) break;
    try {
      size_t used = 0;
      counts[i] = std::stoll(piece, &used);
      if (used != piece.size() || counts[i] < 0) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{} expects four non-negative integers, got '{}'", flag, text));
    }
    ++i;
  }
  if (i != kNumLabels || std::getline(in, piece, ',')) {
    throw ConfigError(fmt::format("{} expects four comma-separated counts, got '{}'", flag, text));
  }
  return counts;
}

struct SynthFlags {
  std::string labeled = "129,190,140,41";
  std::string unlabeled = "375,375,375,375";
  std::string test = "25,25,25,25";
  double marker_probability = 0.7;
  uint64_t seed = 0;
  std::string output_dir = "risklens-data";
};

int CmdSynth(const SynthFlags& flags, std::ostream& out) {
  SyntheticSpec spec;
  spec.marker_probability = flags.marker_probability;
  const BenchmarkSplits splits =
      MakeBenchmark(spec, ParseCounts(flags.labeled, "--labeled"),
                    ParseCounts(flags.unlabeled, "--unlabeled"), ParseCounts(flags.test, "--test"),
                    flags.seed);
  const fs::path dir = flags.output_dir;
  fs::create_directories(dir);
  const Corpus train = Concat(splits.labeled, splits.unlabeled);
  SaveCorpus(train, dir / "train.jsonl", CorpusFormat::kJsonl);
  SaveCorpus(splits.test, dir / "test.jsonl", CorpusFormat::kJsonl);
  out << fmt::format("wrote {} training posts ({} labeled) and {} test posts to {}\n", train.size(),
                     splits.labeled.size(), splits.test.size(), dir.string());
  return kExitOk;
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const EvalInputError*>(&e)) return kExitEval;
  if (dynamic_cast<const TransportError*>(&e) || dynamic_cast<const RemoteError*>(&e)) {
    return kExitTransport;
  }
  return kExitData;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"risklens: semi-supervised risk-level classification toolkit", "risklens"};
  app.set_version_flag("--version", std::string(Version()));
  app.require_subcommand(1);

  std::string stats_path;
  bool stats_json = false;
  CLI::App* stats = app.add_subcommand("stats", "Class counts and labeled/unlabeled split of a corpus");
  stats->add_option("corpus", stats_path, "Corpus file (.jsonl or .csv)")->required();
  stats->add_flag("--json", stats_json, "Machine-readable output");

  CommonFlags augment_flags;
  std::string augment_output;
  CLI::App* augment = app.add_subcommand("augment", "Upsample minority classes");
  augment_flags.Register(augment);
  augment->add_option("--output", augment_output, "Augmented corpus path");

  CommonFlags selftrain_flags;
  CLI::App* selftrain = app.add_subcommand("selftrain", "Train with iterative pseudo-labeling");
  selftrain_flags.Register(selftrain);

  EvalFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "Score predictions against reference labels");
  eval->add_option("--model", eval_flags.model, "Model artifact (model.json)");
  eval->add_option("--test", eval_flags.test, "Test corpus");
  eval->add_option("--predictions", eval_flags.predictions, "Predicted label file (id,label)");
  eval->add_option("--reference", eval_flags.reference, "Reference label file (id,label)");
  eval->add_option("--format", eval_flags.format, "text, csv, json or svg");
  eval->add_option("--output", eval_flags.output, "Write the rendering here instead of stdout");
  eval->add_option("-c,--config", eval_flags.config, "Configuration (for remote models)")
      ->check(CLI::ExistingFile);
  eval->add_option("--set", eval_flags.sets, "Override a config key")->take_all();
  eval->add_option("--endpoint", eval_flags.endpoint, "Model endpoint base URL");

  CommonFlags label_flags;
  std::string label_output;
  CLI::App* label = app.add_subcommand("label", "Few-shot reference labeling through a chat endpoint");
  label_flags.Register(label);
  label->add_option("--output", label_output, "Label file path");

  CommonFlags pipeline_flags;
  CLI::App* pipeline = app.add_subcommand("pipeline", "Preprocess, augment, self-train and evaluate");
  pipeline_flags.Register(pipeline);

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic marker benchmark");
  synth->add_option("--labeled", synth_flags.labeled,
                    "Labeled posts per class (indicator,ideation,behavior,attempt)");
  synth->add_option("--unlabeled", synth_flags.unlabeled, "Unlabeled posts per class");
  synth->add_option("--test", synth_flags.test, "Test posts per class");
  synth->add_option("--marker-probability", synth_flags.marker_probability,
                    "Chance that a post carries class markers");
  synth->add_option("--seed", synth_flags.seed, "Seed");
  synth->add_option("-o,--output-dir", synth_flags.output_dir, "Directory for train.jsonl and test.jsonl");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (stats->parsed()) return CmdStats(stats_path, stats_json, out);
    if (augment->parsed()) return CmdAugment(augment_flags, augment_output, out);
    if (selftrain->parsed()) return CmdSelfTrain(selftrain_flags, out);
    if (eval->parsed()) return CmdEval(eval_flags, out);
    if (label->parsed()) return CmdLabel(label_flags, label_output, out, err);
    if (pipeline->parsed()) return CmdPipeline(pipeline_flags, out, err);
    if (synth->parsed()) return CmdSynth(synth_flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitUsage;
}

}  // namespace risklens::cli
