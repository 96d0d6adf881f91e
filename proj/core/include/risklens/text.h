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

#ifndef RISKLENS_TEXT_H_
#define RISKLENS_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace risklens {

bool IsValidUtf8(std::string_view text);

// True when the text has no non-whitespace code point.
bool IsBlank(std::string_view text);

// Splits on ASCII spaces, dropping empty pieces.
std::vector<std::string> SplitOnSpaces(std::string_view text);

std::string JoinWithSpaces(const std::vector<std::string>& tokens);

}  // namespace risklens

#endif  // RISKLENS_TEXT_H_
