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

#ifndef RISKLENS_ERROR_H_
#define RISKLENS_ERROR_H_

#include <stdexcept>
#include <string>

namespace risklens {

// Base class for every error raised by the library. The subclasses map onto
// the CLI exit codes (see tools/cli/commands.h).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or arguments supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (corpus files, label files, models).
class DataError : public Error {
 public:
  using Error::Error;
};

// A record-level data error that knows where it happened.
class RecordError : public DataError {
 public:
  RecordError(const std::string& source, int64_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  int64_t line() const { return line_; }

 private:
  int64_t line_;
};

// Training could not proceed (degenerate label set, dimension mismatch).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Evaluation inputs do not line up (missing predictions, length mismatch).
class EvalInputError : public Error {
 public:
  using Error::Error;
};

// Network failure after the retry budget is spent.
class TransportError : public Error {
 public:
  using Error::Error;
};

// The backend answered with a structured {code, message} error payload.
class RemoteError : public Error {
 public:
  RemoteError(int status, std::string code, std::string message)
      : Error("remote error " + std::to_string(status) + " " + code + ": " +
              message),
        status_(status),
        code_(std::move(code)),
        message_(std::move(message)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const std::string& remote_message() const { return message_; }

 private:
  int status_;
  std::string code_;
  std::string message_;
};

}  // namespace risklens

#endif  // RISKLENS_ERROR_H_
