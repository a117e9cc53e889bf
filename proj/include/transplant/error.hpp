// Copyright 2026 The transplant-bench Authors. All Rights Reserved.
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

#include <stdexcept>
#include <string>

namespace transplant {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value broke one of its type's invariants (bad box, empty mask, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Input text (JSON, RLE strings, exchange records) could not be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File system or network failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied configuration is invalid. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace transplant
