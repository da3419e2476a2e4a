// Copyright 2026 The deepwolf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPWOLF_ERRORS_HPP_
#define DEEPWOLF_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deepwolf {

// Root of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPlayer : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// An event that the rules do not allow in the current state.
class IllegalEvent : public Error {
 public:
  explicit IllegalEvent(std::string reason)
      : Error("illegal event: " + reason), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class EmptyVotes : public Error {
 public:
  EmptyVotes() : Error("no votes to tally") {}
};

class MissingNightAction : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string reason)
      : Error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}
  // 1-based.
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// A record whose events do not replay through the engine. `line` is the
// 1-based position of the offending event in the record.
class InconsistentRecord : public Error {
 public:
  InconsistentRecord(std::size_t line, std::string reason)
      : Error("event " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(std::move(reason)) {}
  std::size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class ViewerMismatch : public Error {
 public:
  using Error::Error;
};

class UnfinishedRecord : public Error {
 public:
  using Error::Error;
};

class KeyMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class ModelMissing : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// Remote oracle failures.
class OracleTimeout : public Error {
 public:
  using Error::Error;
};
class ProtocolError : public Error {
 public:
  using Error::Error;
};
class Unreachable : public Error {
 public:
  using Error::Error;
};

class NoSuchRoleInLogs : public Error {
 public:
  using Error::Error;
};

class NoCandidates : public Error {
 public:
  using Error::Error;
};

class BadSeatPlan : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

class PolicyLoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace deepwolf

#endif  // DEEPWOLF_ERRORS_HPP_
