// Copyright 2026 The ISEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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

namespace isec {

// Malformed input text (JSON, CSV, embedding rows).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input whose values break a contract (negative cost, alpha > 1, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scoring input outside the admissible domain: zero frequency, nonpositive
// DSN/CMP, identity pairs.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& message, std::size_t row = 0)
      : std::runtime_error(row == 0 ? message : "row " + std::to_string(row) + ": " + message),
        row_(row) {}

  /// 1-based data row (header excluded); 0 when the error is not row-specific.
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace isec
