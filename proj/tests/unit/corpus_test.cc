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

#include <sstream>

#include <catch_amalgamated.hpp>

#include "risklens/corpus.h"
#include "risklens/error.h"
#include "risklens/label.h"
#include "risklens/rng.h"
#include "risklens/synthetic.h"
#include "support/test_support.h"

namespace risklens {
namespace {

using testing::Labeled;
using testing::TempDir;
using testing::Unlabeled;
using testing::WriteText;

TEST_CASE("labels round-trip through their names") {
  for (RiskLabel label : kAllLabels) CHECK(ParseLabel(LabelName(label)) == label);
  CHECK(ParseLabel("Behaviour") == RiskLabel::kBehavior);
  CHECK(ParseLabel("  ATTEMPT ") == RiskLabel::kAttempt);
  CHECK_FALSE(ParseLabel("suicidal").has_value());
  CHECK_THROWS_AS(ParseLabelOrThrow("none"), DataError);
  CHECK(Index(RiskLabel::kIndicator) == 0);
  CHECK(Index(RiskLabel::kAttempt) == 3);
}

TEST_CASE("JSONL records map onto posts") {
  TempDir dir;
  WriteText(dir / "c.jsonl",
            "{\"id\":\"a1\",\"text\":\"i feel empty\",\"label\":\"ideation\"}\n"
            "{\"id\":\"a2\",\"text\":\"rough week\"}\n"
            "\n"
            "{\"id\":\"a3\",\"text\":\"...\",\"label\":\"Behaviour\"}\n");
  const Corpus c = LoadCorpus(dir / "c.jsonl");
  REQUIRE(c.size() == 3);
  CHECK(c[0] == Labeled("a1", "i feel empty", RiskLabel::kIdeation));
  CHECK(c[1] == Unlabeled("a2", "rough week"));
  CHECK(c[2].label == RiskLabel::kBehavior);
  CHECK(c[2].origin == Origin::kOriginal);
}

TEST_CASE("load errors carry the line number") {
  TempDir dir;
  auto line_of = [&](const std::string& contents) -> int64_t {
    WriteText(dir / "bad.jsonl", contents);
    try {
      LoadCorpus(dir / "bad.jsonl");
    } catch (const RecordError& e) {
      return e.line();
    }
    return -1;
  };
  const std::string good = "{\"id\":\"a\",\"text\":\"x\"}\n";
  CHECK(line_of(good + "{not json\n") == 2);
  CHECK(line_of(good + "{\"id\":\"b\",\"text\":\"y\",\"label\":\"sad\"}\n") == 2);
  CHECK(line_of(good + good) == 2);
  CHECK(line_of(good + "\n{\"id\":\"b\",\"text\":\"   \"}\n") == 3);
  CHECK(line_of("{\"text\":\"no id\"}\n") == 1);
}

TEST_CASE("CSV uses an id,text,label header and empty labels") {
  TempDir dir;
  WriteText(dir / "c.csv",
            "id,text,label\n"
            "a,\"hello, \"\"world\"\"\",attempt\n"
            "b,\"two\nlines\",\n");
  const Corpus c = LoadCorpus(dir / "c.csv");
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "hello, \"world\"");
  CHECK(c[0].label == RiskLabel::kAttempt);
  CHECK(c[1].text == "two\nlines");
  CHECK_FALSE(c[1].label.has_value());

  WriteText(dir / "bad.csv", "id,text,label\na,x,nope\n");
  CHECK_THROWS_AS(LoadCorpus(dir / "bad.csv"), RecordError);
}

TEST_CASE("save then load reproduces the corpus in both formats") {
  Corpus c("test");
  c.Add(Labeled("p1", "quote \" and, comma", RiskLabel::kIndicator));
  c.Add(Unlabeled("p2", "ünïcödé 😢 text\nwith newline"));
  c.Add(Post{"p3", "generated", RiskLabel::kAttempt, Origin::kSynthetic});
  c.Add(Post{"p4", "pseudo", RiskLabel::kIdeation, Origin::kPseudo});
  TempDir dir;
  for (const char* name : {"round.jsonl", "round.csv"}) {
    SaveCorpus(c, dir / name);
    const Corpus back = LoadCorpus(dir / name);
    CHECK(back.SamePosts(c));
  }
}

TEST_CASE("JSONL output keeps a stable field order") {
  Corpus c;
  c.Add(Labeled("a", "t", RiskLabel::kBehavior));
  c.Add(Unlabeled("b", "u"));
  c.Add(Post{"c", "v", RiskLabel::kAttempt, Origin::kSynthetic});
  std::ostringstream out;
  WriteCorpus(c, out, CorpusFormat::kJsonl);
  CHECK(out.str() ==
        "{\"id\":\"a\",\"text\":\"t\",\"label\":\"behavior\"}\n"
        "{\"id\":\"b\",\"text\":\"u\"}\n"
        "{\"id\":\"c\",\"text\":\"v\",\"label\":\"attempt\",\"origin\":\"synthetic\"}\n");
}

TEST_CASE("corpus invariants are enforced on insertion") {
  Corpus c;
  c.Add(Unlabeled("x", "text"));
  CHECK_THROWS_AS(c.Add(Unlabeled("x", "other")), DataError);
  CHECK_THROWS_AS(c.Add(Unlabeled("y", " \t\n")), DataError);
  CHECK_THROWS_AS(c.Add(Post{"z", "t", std::nullopt, Origin::kPseudo}), DataError);
  CHECK_THROWS_AS(c.Add(Post{"w", "t", std::nullopt, Origin::kSynthetic}), DataError);
}

Corpus CompetitionShaped() {
  // 129 indicator, 190 ideation, 140 behavior, 41 attempt, 1500 unlabeled.
  Corpus c;
  const std::array<int64_t, kNumLabels> sizes = {129, 190, 140, 41};
  int n = 0;
  for (RiskLabel label : kAllLabels) {
    for (int64_t i = 0; i < sizes[Index(label)]; ++i) {
      c.Add(Labeled("l" + std::to_string(n++), "post", label));
    }
  }
  for (int i = 0; i < 1500; ++i) c.Add(Unlabeled("u" + std::to_string(i), "post"));
  return c;
}

TEST_CASE("class counts over the competition-shaped training data") {
  const Corpus c = CompetitionShaped();
  const ClassCounts counts = CountClasses(c);
  CHECK(counts[RiskLabel::kIdeation] == 190);
  CHECK(counts[RiskLabel::kBehavior] == 140);
  CHECK(counts[RiskLabel::kIndicator] == 129);
  CHECK(counts[RiskLabel::kAttempt] == 41);
  CHECK(counts.total == 500);
  CHECK(CountClasses(Corpus{}).total == 0);

  const auto [labeled, unlabeled] = SplitLabeledUnlabeled(c);
  CHECK(labeled.size() == 500);
  CHECK(unlabeled.size() == 1500);
}

TEST_CASE("split preserves the original interleaving") {
  Corpus c;
  for (int i = 0; i < 40; ++i) {
    if (i % 3 == 0) {
      c.Add(Unlabeled("p" + std::to_string(i), "t"));
    } else {
      c.Add(Labeled("p" + std::to_string(i), "t", LabelAt(i % 4)));
    }
  }
  const auto [labeled, unlabeled] = SplitLabeledUnlabeled(c);
  CHECK(labeled.size() + unlabeled.size() == c.size());
  size_t li = 0, ui = 0;
  for (const Post& post : c) {
    const Post& next = post.label ? labeled[li++] : unlabeled[ui++];
    CHECK(next == post);
  }
}

TEST_CASE("stratified holdout rounds per class") {
  Corpus balanced;
  for (int i = 0; i < 100; ++i) balanced.Add(Labeled("b" + std::to_string(i), "t", LabelAt(i % 4)));
  const auto [train, holdout] = StratifiedHoldout(balanced, 0.2, 5);
  CHECK(holdout.size() == 20);
  for (RiskLabel label : kAllLabels) CHECK(CountClasses(holdout)[label] == 5);
  CHECK(train.size() == 80);

  const auto again = StratifiedHoldout(balanced, 0.2, 5);
  CHECK(again.first.SamePosts(train));
  CHECK(again.second.SamePosts(holdout));

  const Corpus competition = SplitLabeledUnlabeled(CompetitionShaped()).first;
  const auto split = StratifiedHoldout(competition, 0.1, 11);
  const ClassCounts h = CountClasses(split.second);
  CHECK(h[RiskLabel::kIdeation] == 19);
  CHECK(h[RiskLabel::kBehavior] == 14);
  CHECK(h[RiskLabel::kIndicator] == 13);
  CHECK(h[RiskLabel::kAttempt] == 4);
  for (const Post& post : split.second) CHECK_FALSE(split.first.Contains(post.id));
  CHECK(split.first.size() + split.second.size() == competition.size());
}

TEST_CASE("stratified holdout proportions stay within one item per class") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Corpus c;
    Rng rng(seed);
    std::array<int64_t, kNumLabels> sizes{};
    for (auto& s : sizes) s = rng.UniformInt(1, 60);
    int n = 0;
    for (RiskLabel label : kAllLabels) {
      for (int64_t i = 0; i < sizes[Index(label)]; ++i) {
        c.Add(Labeled("x" + std::to_string(n++), "t", label));
      }
    }
    const double fraction = 0.05 + 0.9 * rng.Uniform01();
    const auto [train, holdout] = StratifiedHoldout(c, fraction, seed);
    const ClassCounts h = CountClasses(holdout);
    for (RiskLabel label : kAllLabels) {
      const double share = static_cast<double>(h[label]) / static_cast<double>(sizes[Index(label)]);
      if (h[label] > 0) CHECK(std::abs(share - fraction) < 1.0 / sizes[Index(label)]);
    }
    CHECK(train.size() + holdout.size() == c.size());
  }
  CHECK_THROWS_AS(StratifiedHoldout(Corpus{}, 0.2, 1), DataError);
}

TEST_CASE("synthetic corpora") {
  SyntheticSpec spec;
  spec.class_sizes = {10, 10, 10, 10};
  spec.marker_probability = 1.0;
  const Corpus forced = MakeSyntheticCorpus(spec, 3);
  for (const Post& post : forced) CHECK(ContainsMarker(post.text, *post.label));
  CHECK(MakeSyntheticCorpus(spec, 3).SamePosts(forced));

  spec.class_sizes = {129, 190, 140, 41};
  CHECK(CountClasses(MakeSyntheticCorpus(spec, 1)) == ClassCounts::FromArray({129, 190, 140, 41}));

  spec.background_vocab_size = 0;
  CHECK_THROWS_AS(MakeSyntheticCorpus(spec, 1), ConfigError);
}

TEST_CASE("synthetic marker presence tracks the marker probability") {
  for (double p : {0.3, 0.7}) {
    SyntheticSpec spec;
    spec.class_sizes = {250, 250, 250, 250};
    spec.marker_probability = p;
    const Corpus c = MakeSyntheticCorpus(spec, 2024);
    for (RiskLabel label : kAllLabels) {
      int64_t with = 0, total = 0;
      for (const Post& post : c) {
        if (post.label != label) continue;
        ++total;
        with += ContainsMarker(post.text, label);
      }
      CHECK(std::abs(static_cast<double>(with) / total - p) < 0.05);
    }
  }
}

}  // namespace
}  // namespace risklens
