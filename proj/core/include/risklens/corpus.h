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

#ifndef RISKLENS_CORPUS_H_
#define RISKLENS_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "risklens/label.h"

namespace risklens {

enum class Origin : uint8_t { kOriginal, kSynthetic, kPseudo };

std::string_view OriginName(Origin origin);
std::optional<Origin> ParseOrigin(std::string_view text);

struct Post {
  std::string id;
  std::string text;
  std::optional<RiskLabel> label;
  Origin origin = Origin::kOriginal;

  bool operator==(const Post&) const = default;
};

// Per-class label counts over the labeled posts of a corpus.
struct ClassCounts {
  std::array<int64_t, kNumLabels> counts{};
  int64_t total = 0;

  int64_t operator[](RiskLabel label) const { return counts[Index(label)]; }
  bool operator==(const ClassCounts&) const = default;

  static ClassCounts FromArray(const std::array<int64_t, kNumLabels>& counts);
};

// An ordered collection of posts with unique ids. Iteration order is the
// insertion order; posts are never reordered once added.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string provenance) : provenance_(std::move(provenance)) {}

  // Validates and appends. Throws DataError on a duplicate id, blank text,
  // or a synthetic/pseudo post without a label.
  void Add(Post post);

  const std::vector<Post>& posts() const { return posts_; }
  size_t size() const { return posts_.size(); }
  bool empty() const { return posts_.empty(); }
  const Post& operator[](size_t i) const { return posts_[i]; }
  auto begin() const { return posts_.begin(); }
  auto end() const { return posts_.end(); }

  const Post* Find(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string provenance) {
    provenance_ = std::move(provenance);
  }

  // Field-for-field equality of the posts (provenance is ignored).
  bool SamePosts(const Corpus& other) const { return posts_ == other.posts_; }

 private:
  std::vector<Post> posts_;
  std::unordered_map<std::string, size_t> index_;
  std::string provenance_;
};

enum class CorpusFormat { kJsonl, kCsv };

// Picks the format from the file extension (.jsonl/.json vs .csv).
CorpusFormat FormatForPath(const std::filesystem::path& path);

// Loads one post per record; origin defaults to original. Throws
// RecordError with the 1-based line number for malformed records, unknown
// labels, duplicate ids and empty text.
Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format);
Corpus LoadCorpus(const std::filesystem::path& path);

// JSONL: fields in the order id, text, label (omitted when absent), origin
// (omitted when original). CSV: header id,text,label plus an origin column
// when any post is not original.
void WriteCorpus(const Corpus& corpus, std::ostream& out, CorpusFormat format);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                CorpusFormat format);
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path);

ClassCounts CountClasses(const Corpus& corpus);

// (labeled, unlabeled), each preserving the input order.
std::pair<Corpus, Corpus> SplitLabeledUnlabeled(const Corpus& corpus);

// Stratified (train, holdout) split of the labeled posts. Each class puts
// round(fraction * class_size) posts (half away from zero) into the holdout;
// a class whose share rounds to zero stays entirely in train. Both halves
// keep corpus order. Unlabeled posts are not part of either half.
std::pair<Corpus, Corpus> StratifiedHoldout(const Corpus& corpus,
                                            double fraction, uint64_t seed);

// Copy with every label removed and origin reset to original.
Corpus StripLabels(const Corpus& corpus);

// Posts of the given origin(s), in order.
Corpus FilterByOrigin(const Corpus& corpus, Origin origin);
Corpus WithoutOrigin(const Corpus& corpus, Origin origin);

// Appends all posts of `extra` to a copy of `base`.
Corpus Concat(const Corpus& base, const Corpus& extra);

}  // namespace risklens

#endif  // RISKLENS_CORPUS_H_
