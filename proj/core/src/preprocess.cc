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

#include "risklens/preprocess.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>

#include "risklens/csv.h"
#include "risklens/error.h"

namespace risklens {
namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::kStripHtml, "strip_html"},
    {Stage::kReplaceEmoji, "replace_emoji"},
    {Stage::kStripAccents, "strip_accents"},
    {Stage::kLowercase, "lowercase"},
    {Stage::kExpandAcronyms, "expand_acronyms"},
    {Stage::kRemoveSpecialChars, "remove_special_chars"},
    {Stage::kCollapseWhitespace, "collapse_whitespace"},
};

icu::UnicodeString FromUtf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string ToUtf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

void AppendCodePoint(std::string& out, UChar32 c) {
  char buffer[U8_MAX_LENGTH];
  int32_t length = 0;
  UBool error = false;
  U8_APPEND(buffer, length, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buffer, static_cast<size_t>(length));
}

// Iterates code points of possibly invalid UTF-8; ill-formed bytes come out
// as U+FFFD.
template <typename Fn>
void ForEachCodePoint(std::string_view text, Fn&& fn) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    fn(c, static_cast<size_t>(start), static_cast<size_t>(i));
  }
}

bool IsWordChar(UChar32 c) {
  return u_isalpha(c) || u_isdigit(c) || c == '\'' || c == '_';
}

bool IsHtmlTagStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '/' ||
         c == '!' || c == '?';
}

bool IsSingleLowercaseToken(const std::string& key) {
  if (key.empty()) return false;
  bool ok = true;
  ForEachCodePoint(key, [&](UChar32 c, size_t, size_t) {
    if (!IsWordChar(c) || u_isupper(c)) ok = false;
  });
  return ok && Lowercase(key) == key;
}

bool IsEmojiToken(const std::string& value) {
  if (value.size() < 3 || value.front() != ':' || value.back() != ':') {
    return false;
  }
  for (size_t i = 1; i + 1 < value.size(); ++i) {
    const char c = value[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::string_view StageName(Stage stage) {
  for (const auto& [s, name] : kStageNames) {
    if (s == stage) return name;
  }
  return "unknown";
}

std::optional<Stage> ParseStage(std::string_view name) {
  for (const auto& [s, n] : kStageNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

PreprocessConfig PreprocessConfig::Default() {
  PreprocessConfig config;
  for (const auto& [stage, name] : kStageNames) config.stages.push_back(stage);
  config.acronym_table = BundledAcronyms();
  config.emoji_table = BundledEmoji();
  return config;
}

void PreprocessConfig::Validate() const {
  std::set<Stage> seen;
  for (Stage stage : stages) {
    if (!seen.insert(stage).second) {
      throw ConfigError("duplicate preprocess stage '" +
                        std::string(StageName(stage)) + "'");
    }
  }
  for (const auto& [key, value] : acronym_table) {
    if (!IsSingleLowercaseToken(key)) {
      throw ConfigError("acronym key '" + key +
                        "' must be a single lowercase token");
    }
  }
  for (const auto& [key, value] : emoji_table) {
    if (key.empty()) throw ConfigError("empty emoji key");
    if (!IsEmojiToken(value)) {
      throw ConfigError("emoji replacement '" + value +
                        "' must look like :snake_case_name:");
    }
  }
}

nlohmann::json PreprocessConfig::ToJson() const {
  nlohmann::json stage_names = nlohmann::json::array();
  for (Stage stage : stages) stage_names.push_back(std::string(StageName(stage)));
  return {{"stages", stage_names},
          {"acronym_entries", acronym_table.size()},
          {"emoji_entries", emoji_table.size()}};
}

nlohmann::json PreprocessConfig::ToFullJson() const {
  nlohmann::json stage_names = nlohmann::json::array();
  for (Stage stage : stages) stage_names.push_back(std::string(StageName(stage)));
  return {{"stages", stage_names},
          {"acronym_table", acronym_table},
          {"emoji_table", emoji_table}};
}

PreprocessConfig PreprocessConfig::FromFullJson(const nlohmann::json& j) {
  PreprocessConfig config;
  try {
    for (const auto& name : j.at("stages")) {
      auto stage = ParseStage(name.get<std::string>());
      if (!stage) throw ConfigError("unknown preprocess stage '" + name.get<std::string>() + "'");
      config.stages.push_back(*stage);
    }
    for (const auto& [k, v] : j.at("acronym_table").items()) {
      config.acronym_table.emplace(k, v.get<std::string>());
    }
    for (const auto& [k, v] : j.at("emoji_table").items()) {
      config.emoji_table.emplace(k, v.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed preprocess config: ") + e.what());
  }
  config.Validate();
  return config;
}

std::string StripHtml(std::string_view text) {
  std::string without_tags;
  without_tags.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<' && i + 1 < text.size() && IsHtmlTagStart(text[i + 1])) {
      const size_t close = text.find('>', i + 1);
      if (close != std::string_view::npos) {
        without_tags.push_back(' ');
        i = close;
        continue;
      }
    }
    without_tags.push_back(text[i]);
  }

  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'},
      {"&#39;", '\''}};
  std::string out;
  out.reserve(without_tags.size());
  std::string_view rest = without_tags;
  while (!rest.empty()) {
    bool decoded = false;
    if (rest.front() == '&') {
      for (const auto& [entity, c] : kEntities) {
        if (rest.starts_with(entity)) {
          out.push_back(c);
          rest.remove_prefix(entity.size());
          decoded = true;
          break;
        }
      }
    }
    if (!decoded) {
      out.push_back(rest.front());
      rest.remove_prefix(1);
    }
  }
  return out;
}

std::string ReplaceEmoji(std::string_view text, const ReplacementTable& table) {
  if (table.empty()) return std::string(text);
  size_t max_key = 0;
  for (const auto& entry : table) max_key = std::max(max_key, entry.first.size());

  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    for (size_t len = std::min(max_key, text.size() - i); len > 0; --len) {
      auto it = table.find(text.substr(i, len));
      if (it != table.end()) {
        out.push_back(' ');
        out += it->second;
        out.push_back(' ');
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string StripAccents(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU normalizer unavailable");
  icu::UnicodeString decomposed = nfd->normalize(FromUtf8(text), status);
  icu::UnicodeString kept;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_getCombiningClass(c) == 0) kept.append(c);
    i += U16_LENGTH(c);
  }
  icu::UnicodeString composed = nfc->normalize(kept, status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");
  return ToUtf8(composed);
}

std::string Lowercase(std::string_view text) {
  icu::UnicodeString s = FromUtf8(text);
  s.toLower(icu::Locale::getRoot());
  return ToUtf8(s);
}

std::string ExpandAcronyms(std::string_view text, const ReplacementTable& table) {
  std::string out;
  out.reserve(text.size());
  size_t word_start = std::string::npos;
  auto flush_word = [&](size_t stop) {
    if (word_start == std::string::npos) return;
    const std::string_view word = text.substr(word_start, stop - word_start);
    auto it = table.find(Lowercase(word));
    if (it != table.end()) {
      out += Lowercase(it->second);
    } else {
      out.append(word);
    }
    word_start = std::string::npos;
  };
  ForEachCodePoint(text, [&](UChar32 c, size_t start, size_t stop) {
    if (IsWordChar(c)) {
      if (word_start == std::string::npos) word_start = start;
      return;
    }
    flush_word(start);
    out.append(text.substr(start, stop - start));
  });
  flush_word(text.size());
  return out;
}

std::string RemoveSpecialChars(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  ForEachCodePoint(text, [&](UChar32 c, size_t, size_t) {
    if (c == 0x2018 || c == 0x2019) c = '\'';
    const bool keep = u_isalpha(c) || u_isdigit(c) || u_isUWhiteSpace(c) ||
                      c == '\'' || c == ':' || c == '_';
    if (keep) {
      AppendCodePoint(out, c);
    } else {
      out.push_back(' ');
    }
  });
  return out;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  ForEachCodePoint(text, [&](UChar32 c, size_t, size_t) {
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      return;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    AppendCodePoint(out, c);
  });
  return out;
}

std::string ApplyStage(Stage stage, std::string_view text,
                       const PreprocessConfig& config) {
  switch (stage) {
    case Stage::kStripHtml:
      return StripHtml(text);
    case Stage::kReplaceEmoji:
      return ReplaceEmoji(text, config.emoji_table);
    case Stage::kStripAccents:
      return StripAccents(text);
    case Stage::kLowercase:
      return Lowercase(text);
    case Stage::kExpandAcronyms:
      return ExpandAcronyms(text, config.acronym_table);
    case Stage::kRemoveSpecialChars:
      return RemoveSpecialChars(text);
    case Stage::kCollapseWhitespace:
      return CollapseWhitespace(text);
  }
  return std::string(text);
}

std::string Normalize(std::string_view text, const PreprocessConfig& config) {
  std::string current(text);
  for (Stage stage : config.stages) current = ApplyStage(stage, current, config);
  return current;
}

Corpus NormalizeCorpus(const Corpus& corpus, const PreprocessConfig& config,
                       size_t* kept_raw) {
  Corpus out(corpus.provenance());
  size_t raw = 0;
  for (Post post : corpus) {
    std::string normalized = Normalize(post.text, config);
    if (normalized.find_first_not_of(' ') == std::string::npos) {
      ++raw;
    } else {
      post.text = std::move(normalized);
    }
    out.Add(std::move(post));
  }
  if (kept_raw != nullptr) *kept_raw = raw;
  return out;
}

ReplacementTable LoadReplacementTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open table '" + path.string() + "'");
  ReplacementTable table;
  const auto records = csv::ReadAll(in, path.string());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& fields = records[i].fields;
    if (i == 0 && fields.size() == 2 && fields[0] == "key" &&
        fields[1] == "replacement") {
      continue;
    }
    if (fields.size() != 2 || fields[0].empty()) {
      throw RecordError(path.string(), records[i].line,
                        "expected two columns key,replacement");
    }
    table[fields[0]] = fields[1];
  }
  return table;
}

}  // namespace risklens
