// Copyright 2026 The docre Authors.
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

#ifndef DOCRE_ERRORS_H_
#define DOCRE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace docre {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Malformed or invalid input data: ingestion, schema, document validation,
// over-long documents.
class DataError : public Error {
 public:
  using Error::Error;
};

// A DocRED record is malformed; the message names the document and field.
class IngestError : public DataError {
 public:
  using DataError::DataError;
};

// A relation name is missing from the schema, or the schema is inconsistent.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

// A caller violated an operation precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, failed gradient checks, optimizer misuse.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace docre

#endif  // DOCRE_ERRORS_H_
