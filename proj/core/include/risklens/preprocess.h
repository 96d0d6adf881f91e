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

#ifndef RISKLENS_PREPROCESS_H_
#define RISKLENS_PREPROCESS_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/corpus.h"

namespace risklens {

enum class Stage {
  kStripHtml,
  kReplaceEmoji,
  kStripAccents,
  kLowercase,
  kExpandAcronyms,
  kRemoveSpecialChars,
  kCollapseWhitespace,
};

std::string_view StageName(Stage stage);
std::optional<Stage> ParseStage(std::string_view name);

using ReplacementTable = std::map<std::string, std::string, std::less<>>;

// Starter tables shipped with the library.
const ReplacementTable& BundledAcronyms();
const ReplacementTable& BundledEmoji();

struct PreprocessConfig {
  std::vector<Stage> stages;
  ReplacementTable acronym_table;
  ReplacementTable emoji_table;

  // All seven stages in the default order with the bundled tables:
  // strip_html, replace_emoji, strip_accents, lowercase, expand_acronyms,
  // remove_special_chars, collapse_whitespace.
  static PreprocessConfig Default();

  // Throws ConfigError on duplicate stages, acronym keys that are not a
  // single lowercase token, or emoji replacements not of the form :name:.
  void Validate() const;

  // Summary: stage names and table sizes.
  nlohmann::json ToJson() const;
  // Stages plus both tables in full, for model artifacts.
  nlohmann::json ToFullJson() const;
  // Inverse of ToFullJson. Throws ConfigError on unknown stages.
  static PreprocessConfig FromFullJson(const nlohmann::json& j);
};

// Removes <...> tags (a '<' followed by a letter, '/', '!' or '?', up to the
// next '>') replacing each with a space, then decodes &amp; &lt; &gt; &quot;
// and &#39; in a single pass.
std::string StripHtml(std::string_view text);

// Longest-match replacement of table keys; each replacement is padded with
// spaces so it stays a separate token.
std::string ReplaceEmoji(std::string_view text, const ReplacementTable& table);

// Canonical decomposition, removal of code points with a non-zero combining
// class, then recomposition.
std::string StripAccents(std::string_view text);

// Full Unicode lowercase mapping (root locale).
std::string Lowercase(std::string_view text);

// Replaces whole word tokens (runs of letters, digits, apostrophes and
// underscores) whose lowercase form is a table key.
std::string ExpandAcronyms(std::string_view text, const ReplacementTable& table);

// Keeps letters, digits, whitespace, apostrophe, colon and underscore; every
// other code point becomes a space. Typographic single quotes map to "'".
std::string RemoveSpecialChars(std::string_view text);

// Collapses whitespace runs to one space and trims both ends.
std::string CollapseWhitespace(std::string_view text);

std::string ApplyStage(Stage stage, std::string_view text,
                       const PreprocessConfig& config);

// Applies the configured stages in order.
std::string Normalize(std::string_view text, const PreprocessConfig& config);

// Normalizes every post. A post whose normalized text would be blank keeps
// its original text; the number of such posts is stored in *kept_raw.
Corpus NormalizeCorpus(const Corpus& corpus, const PreprocessConfig& config,
                       size_t* kept_raw = nullptr);

// Two-column CSV (key,replacement); an optional "key,replacement" header
// row is skipped.
ReplacementTable LoadReplacementTable(const std::filesystem::path& path);

}  // namespace risklens

#endif  // RISKLENS_PREPROCESS_H_
