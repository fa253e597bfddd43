// Copyright 2026 The pseudoforge Authors
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

#ifndef PSEUDOFORGE_ERROR_HPP_
#define PSEUDOFORGE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pseudoforge {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File system failures (missing file, unwritable path).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Malformed input data. Carries a 1-based line number when one applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value or structure violating a documented invariant or contract.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// An argument outside an operation's stated domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

}  // namespace pseudoforge

#endif  // PSEUDOFORGE_ERROR_HPP_
