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

#include "risklens/csv.h"

#include <iterator>

#include "risklens/error.h"

namespace risklens::csv {

std::vector<Record> ReadAll(std::istream& in, std::string_view source) {
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::vector<Record> records;
  Record current;
  std::string field;
  int64_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool after_quote = false;   // just closed a quoted field
  bool record_has_data = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
    record_has_data = false;
  };

  for (size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      end_field();
      record_has_data = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      if (record_has_data || !field.empty() || !current.fields.empty()) {
        end_record();
      }
      ++line;
      current.line = line;
    } else if (c == '"') {
      if (!field.empty() || after_quote) {
        throw RecordError(std::string(source), line,
                          "unexpected quote inside unquoted field");
      }
      in_quotes = true;
      record_has_data = true;
    } else {
      if (after_quote) {
        throw RecordError(std::string(source), line,
                          "characters after closing quote");
      }
      field.push_back(c);
      record_has_data = true;
    }
  }
  if (in_quotes) {
    throw RecordError(std::string(source), current.line,
                      "unterminated quoted field");
  }
  if (record_has_data || !field.empty() || !current.fields.empty()) {
    end_record();
  }
  return records;
}

std::string EscapeField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << EscapeField(fields[i]);
  }
  out << '\n';
}

}  // namespace risklens::csv
