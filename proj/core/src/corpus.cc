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

#include "risklens/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "risklens/csv.h"
#include "risklens/error.h"
#include "risklens/rng.h"
#include "risklens/text.h"

namespace risklens {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string ValidatePost(const Post& post) {
  if (post.id.empty()) return "empty id";
  if (!IsValidUtf8(post.text)) return "text is not valid UTF-8";
  if (IsBlank(post.text)) return "empty text";
  if (post.origin != Origin::kOriginal && !post.label) {
    return std::string(OriginName(post.origin)) + " post without a label";
  }
  return {};
}

std::string RequireString(const nlohmann::json& object, const char* key,
                          bool* present) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) {
    *present = false;
    return {};
  }
  if (!it->is_string()) {
    throw DataError(std::string("field '") + key + "' must be a string");
  }
  *present = true;
  return it->get<std::string>();
}

Corpus LoadJsonl(std::istream& in, const std::string& source) {
  Corpus corpus(source);
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      nlohmann::json record = nlohmann::json::parse(line);
      if (!record.is_object()) throw DataError("record is not a JSON object");
      Post post;
      bool present = false;
      post.id = RequireString(record, "id", &present);
      if (!present) throw DataError("missing field 'id'");
      post.text = RequireString(record, "text", &present);
      if (!present) throw DataError("missing field 'text'");
      std::string label = RequireString(record, "label", &present);
      if (present) post.label = ParseLabelOrThrow(label);
      std::string origin = RequireString(record, "origin", &present);
      if (present) {
        auto parsed = ParseOrigin(origin);
        if (!parsed) throw DataError("unknown origin '" + origin + "'");
        post.origin = *parsed;
      }
      corpus.Add(std::move(post));
    } catch (const RecordError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw RecordError(source, line_number,
                        std::string("malformed JSON: ") + e.what());
    } catch (const DataError& e) {
      throw RecordError(source, line_number, e.what());
    }
  }
  return corpus;
}

Corpus LoadCsv(std::istream& in, const std::string& source) {
  Corpus corpus(source);
  std::vector<csv::Record> records = csv::ReadAll(in, source);
  if (records.empty()) return corpus;
  const auto& header = records.front().fields;
  const bool has_origin = header.size() == 4 && header[3] == "origin";
  if (header.size() < 3 || header[0] != "id" || header[1] != "text" ||
      header[2] != "label" || (header.size() == 4 && !has_origin) ||
      header.size() > 4) {
    throw RecordError(source, records.front().line,
                      "expected header 'id,text,label' (optionally ',origin')");
  }
  for (size_t r = 1; r < records.size(); ++r) {
    const csv::Record& record = records[r];
    try {
      if (record.fields.size() != header.size()) {
        throw DataError("expected " + std::to_string(header.size()) +
                        " fields, found " +
                        std::to_string(record.fields.size()));
      }
      Post post;
      post.id = record.fields[0];
      post.text = record.fields[1];
      if (!record.fields[2].empty()) {
        post.label = ParseLabelOrThrow(record.fields[2]);
      }
      if (has_origin && !record.fields[3].empty()) {
        auto parsed = ParseOrigin(record.fields[3]);
        if (!parsed) throw DataError("unknown origin '" + record.fields[3] + "'");
        post.origin = *parsed;
      }
      corpus.Add(std::move(post));
    } catch (const DataError& e) {
      throw RecordError(source, record.line, e.what());
    }
  }
  return corpus;
}

}  // namespace

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kOriginal:
      return "original";
    case Origin::kSynthetic:
      return "synthetic";
    case Origin::kPseudo:
      return "pseudo";
  }
  return "unknown";
}

std::optional<Origin> ParseOrigin(std::string_view text) {
  for (Origin origin : {Origin::kOriginal, Origin::kSynthetic, Origin::kPseudo}) {
    if (text == OriginName(origin)) return origin;
  }
  return std::nullopt;
}

ClassCounts ClassCounts::FromArray(
    const std::array<int64_t, kNumLabels>& counts) {
  ClassCounts out;
  out.counts = counts;
  for (int64_t c : counts) out.total += c;
  return out;
}

void Corpus::Add(Post post) {
  if (std::string problem = ValidatePost(post); !problem.empty()) {
    throw DataError(problem + (post.id.empty() ? "" : " (id '" + post.id + "')"));
  }
  if (index_.contains(post.id)) {
    throw DataError("duplicate id '" + post.id + "'");
  }
  index_.emplace(post.id, posts_.size());
  posts_.push_back(std::move(post));
}

const Post* Corpus::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &posts_[it->second];
}

CorpusFormat FormatForPath(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".csv") return CorpusFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    return CorpusFormat::kJsonl;
  }
  throw ConfigError("cannot infer corpus format from '" + path.string() +
                    "' (expected .jsonl or .csv)");
}

Corpus LoadCorpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
  const std::string source = path.string();
  return format == CorpusFormat::kJsonl ? LoadJsonl(in, source)
                                        : LoadCsv(in, source);
}

Corpus LoadCorpus(const std::filesystem::path& path) {
  return LoadCorpus(path, FormatForPath(path));
}

void WriteCorpus(const Corpus& corpus, std::ostream& out, CorpusFormat format) {
  if (format == CorpusFormat::kJsonl) {
    for (const Post& post : corpus) {
      ordered_json record;
      record["id"] = post.id;
      record["text"] = post.text;
      if (post.label) record["label"] = std::string(LabelName(*post.label));
      if (post.origin != Origin::kOriginal) {
        record["origin"] = std::string(OriginName(post.origin));
      }
      out << record.dump() << '\n';
    }
    return;
  }
  const bool with_origin =
      std::any_of(corpus.begin(), corpus.end(),
                  [](const Post& p) { return p.origin != Origin::kOriginal; });
  std::vector<std::string> header = {"id", "text", "label"};
  if (with_origin) header.push_back("origin");
  csv::WriteRow(out, header);
  for (const Post& post : corpus) {
    std::vector<std::string> row = {
        post.id, post.text,
        post.label ? std::string(LabelName(*post.label)) : std::string()};
    if (with_origin) row.emplace_back(OriginName(post.origin));
    csv::WriteRow(out, row);
  }
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path,
                CorpusFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
  WriteCorpus(corpus, out, format);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void SaveCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  SaveCorpus(corpus, path, FormatForPath(path));
}

ClassCounts CountClasses(const Corpus& corpus) {
  ClassCounts counts;
  for (const Post& post : corpus) {
    if (!post.label) continue;
    ++counts.counts[Index(*post.label)];
    ++counts.total;
  }
  return counts;
}

std::pair<Corpus, Corpus> SplitLabeledUnlabeled(const Corpus& corpus) {
  Corpus labeled(corpus.provenance());
  Corpus unlabeled(corpus.provenance());
  for (const Post& post : corpus) {
    (post.label ? labeled : unlabeled).Add(post);
  }
  return {std::move(labeled), std::move(unlabeled)};
}

std::pair<Corpus, Corpus> StratifiedHoldout(const Corpus& corpus,
                                            double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("holdout fraction must lie in (0, 1)");
  }
  std::array<std::vector<size_t>, kNumLabels> by_class;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label) by_class[Index(*corpus[i].label)].push_back(i);
  }
  if (CountClasses(corpus).total == 0) {
    throw DataError("stratified holdout needs labeled posts");
  }
  std::vector<bool> in_holdout(corpus.size(), false);
  for (size_t c = 0; c < kNumLabels; ++c) {
    std::vector<size_t>& members = by_class[c];
    const auto take = static_cast<size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    if (take == 0) continue;
    Rng rng(DeriveSeed(seed, "corpus.holdout", c));
    rng.Shuffle(std::span<size_t>(members));
    for (size_t k = 0; k < take; ++k) in_holdout[members[k]] = true;
  }
  Corpus train(corpus.provenance());
  Corpus holdout(corpus.provenance());
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].label) continue;
    (in_holdout[i] ? holdout : train).Add(corpus[i]);
  }
  return {std::move(train), std::move(holdout)};
}

Corpus StripLabels(const Corpus& corpus) {
  Corpus out(corpus.provenance());
  for (Post post : corpus) {
    post.label.reset();
    post.origin = Origin::kOriginal;
    out.Add(std::move(post));
  }
  return out;
}

Corpus FilterByOrigin(const Corpus& corpus, Origin origin) {
  Corpus out(corpus.provenance());
  for (const Post& post : corpus) {
    if (post.origin == origin) out.Add(post);
  }
  return out;
}

Corpus WithoutOrigin(const Corpus& corpus, Origin origin) {
  Corpus out(corpus.provenance());
  for (const Post& post : corpus) {
    if (post.origin != origin) out.Add(post);
  }
  return out;
}

Corpus Concat(const Corpus& base, const Corpus& extra) {
  Corpus out = base;
  for (const Post& post : extra) out.Add(post);
  return out;
}

}  // namespace risklens
