// Copyright 2026 The Hot Hem Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hothem {

// Base of every error the library throws on bad input. The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: missing layers, mismatched geometry, invalid params.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data files and records.
class DataError : public Error {
 public:
  using Error::Error;
};

// CSV header or model schema does not match what the reader expects.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// A referenced entity (node id, ward) does not exist.
class NotFoundError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace hothem
