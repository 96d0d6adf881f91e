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

#ifndef RISKLENS_FEWSHOT_H_
#define RISKLENS_FEWSHOT_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risklens/corpus.h"
#include "risklens/error.h"
#include "risklens/label.h"

namespace risklens {

class ModelClient;

// Label spelling used inside prompts: Indicator, Ideation, Behaviour, Attempt.
std::string_view PromptLabelName(RiskLabel label);

struct FewShotPrompt {
  std::string system;
  std::string user;
};

// The system text lists one "Post: ...\nLabel: ..." block per class in
// canonical order after the fixed instruction; the user text embeds the
// target post. Throws ConfigError unless the examples hold exactly one
// labeled post per class.
FewShotPrompt BuildFewShotPrompt(std::span<const Post> examples, std::string_view target);

class LabelParseError : public DataError {
 public:
  using DataError::DataError;
};

// Reads "Label: <label>" (case-insensitive, "behaviour" accepted). Without
// such a line, accepts the text only if it names exactly one distinct
// label. Throws LabelParseError otherwise.
RiskLabel ParseLabelResponse(std::string_view text);

struct FewShotFailure {
  std::string id;
  std::string reason;
};

struct FewShotResult {
  std::vector<std::pair<std::string, RiskLabel>> labels;  // corpus order
  std::vector<FewShotFailure> failures;                   // corpus order
  int64_t requests = 0;
};

// One chat request per post. Unparseable replies and backend error payloads
// are recorded per id; transport exhaustion aborts with TransportError.
FewShotResult LabelPostsFewShot(const Corpus& posts, std::span<const Post> examples,
                                const ModelClient& client);

// First labeled post of each class in corpus order. Throws ConfigError when
// a class has no labeled post.
std::vector<Post> PickFewShotExamples(const Corpus& corpus);

}  // namespace risklens

#endif  // RISKLENS_FEWSHOT_H_
