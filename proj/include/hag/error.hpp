// Copyright 2026 The Authors.
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

#ifndef HAG_ERROR_HPP_
#define HAG_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid graph, node reference or structural invariant.
class GraphError : public Error {
 public:
  using Error::Error;
};

// Matching is not a matching of the instance, or a solver precondition
// (hyperedge size, instance cap) failed.
class MatchingError : public Error {
 public:
  using Error::Error;
};

// An algorithm was asked to run outside the regime it supports.
class RegimeError : public Error {
 public:
  RegimeError(const std::string& what, std::int64_t receiver = -1)
      : Error(what), receiver_(receiver) {}
  // Offending receiver, or -1 when the violation is not receiver-specific.
  std::int64_t receiver() const { return receiver_; }

 private:
  std::int64_t receiver_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required,
                 std::uint64_t budget)
      : Error(what), required_(required), budget_(budget) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

// Malformed text input. line() is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hag

#endif  // HAG_ERROR_HPP_
