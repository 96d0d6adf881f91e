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

#ifndef RISKLENS_CSV_H_
#define RISKLENS_CSV_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace risklens::csv {

struct Record {
  std::vector<std::string> fields;
  int64_t line = 0;  // 1-based line on which the record starts
};

// RFC 4180 reader. Accepts LF or CRLF record separators and quoted fields
// with embedded separators, quotes ("") and line breaks. Throws RecordError
// on an unterminated quote or stray characters after a closing quote.
std::vector<Record> ReadAll(std::istream& in, std::string_view source);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string EscapeField(std::string_view field);

// Writes fields joined by commas and terminated by "\n".
void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace risklens::csv

#endif  // RISKLENS_CSV_H_
