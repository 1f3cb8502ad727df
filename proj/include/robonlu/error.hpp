// Copyright 2026 The robonlu Authors
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

#ifndef ROBONLU_ERROR_HPP_
#define ROBONLU_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace robonlu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied value (out-of-range index, empty input where one is
// required, malformed architecture string).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A value object violates one of its structural invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unreadable or syntactically broken file content.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Inconsistent pipeline wiring: missing checkpoints, vocabulary fingerprint
// mismatch, incomplete per-action model maps.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unknown schema or action name.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Training cannot proceed (empty dataset, label outside the model's set).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace robonlu

#endif  // ROBONLU_ERROR_HPP_
