// Copyright 2026 The axpaudit Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace axp {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or schema violations (width mismatch, bad feature index, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed weights documents, CSV files and other structured input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A survey record that cannot be binarized.
class IngestError : public Error {
 public:
  IngestError(std::size_t record_index, const std::string& what)
      : Error("record " + std::to_string(record_index) + ": " + what),
        record_index_(record_index) {}

  std::size_t record_index() const { return record_index_; }

 private:
  std::size_t record_index_;
};

// The logit of some instance that matters to the answer lies within the
// ambiguity margin, so neither decision can be reported soundly.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, double logit)
      : Error(what), logit_(logit) {}

  double logit() const { return logit_; }

 private:
  double logit_;
};

// Bad user-supplied configuration: unknown feature names, non-permutation
// orders, mining bounds out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Enumeration requested over more free features than the configured cap.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace axp
