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

#include "risklens/fewshot.h"

#include <optional>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "risklens/concurrency.h"
#include "risklens/remote.h"

namespace risklens {
namespace {

constexpr std::string_view kCategories =
    "among 4 categories that are ‘indicator’, ‘ideation’, "
    "‘behavior’ and ‘attempt’.";

std::string SystemHeader() {
  return fmt::format(
      "You are the psychologist and your task is to predict the suicidal risk level "
      "from the given posts {} The sample posts and their class is given below:",
      kCategories);
}

std::string UserHeader() {
  return fmt::format(
      "Now I am giving you a new post and your task is to predict the suicidal risk "
      "level from the given posts {} While predicting, you take reference from the "
      "examples given above. Here is the post:",
      kCategories);
}

}  // namespace

std::string_view PromptLabelName(RiskLabel label) {
  switch (label) {
    case RiskLabel::kIndicator:
      return "Indicator";
    case RiskLabel::kIdeation:
      return "Ideation";
    case RiskLabel::kBehavior:
      return "Behaviour";
    case RiskLabel::kAttempt:
      return "Attempt";
  }
  return "";
}

FewShotPrompt BuildFewShotPrompt(std::span<const Post> examples, std::string_view target) {
  std::array<const Post*, kNumLabels> by_class{};
  for (const Post& post : examples) {
    if (!post.label) throw ConfigError("few-shot example '" + post.id + "' has no label");
    const Post*& slot = by_class[Index(*post.label)];
    if (slot != nullptr) {
      throw ConfigError(fmt::format("more than one few-shot example for class {}",
                                    LabelName(*post.label)));
    }
    slot = &post;
  }
  for (RiskLabel label : kAllLabels) {
    if (by_class[Index(label)] == nullptr) {
      throw ConfigError(fmt::format("no few-shot example for class {}", LabelName(label)));
    }
  }
  FewShotPrompt prompt;
  prompt.system = SystemHeader();
  for (RiskLabel label : kAllLabels) {
    prompt.system += fmt::format("\n\nPost: {}\nLabel: {}", by_class[Index(label)]->text,
                                 PromptLabelName(label));
  }
  prompt.user = fmt::format("{}\n\nPost: {}", UserHeader(), target);
  return prompt;
}

RiskLabel ParseLabelResponse(std::string_view text) {
  static const std::regex kLabelLine(R"(label\s*:\s*[^A-Za-z]*([A-Za-z]+))",
                                     std::regex::icase | std::regex::ECMAScript);
  const std::string s(text);
  std::smatch match;
  if (std::regex_search(s, match, kLabelLine)) {
    if (auto label = ParseLabel(match[1].str())) return *label;
  }
  std::set<RiskLabel> found;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (auto label = ParseLabel(word)) found.insert(*label);
    word.clear();
  };
  for (char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      word += c;
    } else {
      flush();
    }
  }
  flush();
  if (found.empty()) throw LabelParseError("no risk label in response");
  if (found.size() > 1) {
    std::string names;
    for (RiskLabel label : found) {
      if (!names.empty()) names += ", ";
      names += LabelName(label);
    }
    throw LabelParseError("response names several labels: " + names);
  }
  return *found.begin();
}

FewShotResult LabelPostsFewShot(const Corpus& posts, std::span<const Post> examples,
                                const ModelClient& client) {
  // Validate the examples once, before any request goes out.
  BuildFewShotPrompt(examples, "");
  const size_t n = posts.size();
  std::vector<std::optional<RiskLabel>> labels(n);
  std::vector<std::string> reasons(n);
  ParallelFor(n, static_cast<size_t>(client.endpoint().max_concurrency), [&](size_t i) {
    const FewShotPrompt prompt = BuildFewShotPrompt(examples, posts[i].text);
    try {
      labels[i] = ParseLabelResponse(client.Chat(prompt.system, prompt.user));
    } catch (const LabelParseError& e) {
      reasons[i] = e.what();
    } catch (const RemoteError& e) {
      reasons[i] = e.what();
    }
  });
  FewShotResult result;
  result.requests = static_cast<int64_t>(n);
  for (size_t i = 0; i < n; ++i) {
    if (labels[i]) {
      result.labels.emplace_back(posts[i].id, *labels[i]);
    } else {
      result.failures.push_back({posts[i].id, reasons[i]});
    }
  }
  return result;
}

std::vector<Post> PickFewShotExamples(const Corpus& corpus) {
  std::array<const Post*, kNumLabels> first{};
  for (const Post& post : corpus) {
    if (post.label && post.origin == Origin::kOriginal && first[Index(*post.label)] == nullptr) {
      first[Index(*post.label)] = &post;
    }
  }
  std::vector<Post> out;
  for (RiskLabel label : kAllLabels) {
    if (first[Index(label)] == nullptr) {
      throw ConfigError(fmt::format("no labeled {} post to use as a few-shot example",
                                    LabelName(label)));
    }
    out.push_back(*first[Index(label)]);
  }
  return out;
}

}  // namespace risklens
