// Copyright 2026 The procauction Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace procauction {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// Problem is too large for an exhaustive routine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A scoring rule lacks the structure an algorithm requires.
class UnsupportedRuleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Stateful object used outside the run it belongs to.
class MisuseError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant; never expected in a correct build.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace procauction
