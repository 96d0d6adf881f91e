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

#include "risklens/version.h"

#include <string>

#include <fmt/format.h>
#include <httplib.h>
#include <openssl/opensslv.h>
#include <unicode/uversion.h>

namespace risklens {

std::string_view Version() { return RISKLENS_VERSION; }

nlohmann::json ComponentVersions() {
  return {
      {"risklens", std::string(Version())},
      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                    NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)},
      {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
      {"icu", U_ICU_VERSION},
      {"openssl", OPENSSL_VERSION_TEXT},
      {"cpp_httplib", CPPHTTPLIB_VERSION},
  };
}

}  // namespace risklens
