// Copyright 2026 The ESBQ Authors. All Rights Reserved.
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

#ifndef ESBQ_ERROR_H_
#define ESBQ_ERROR_H_

#include <stdexcept>
#include <string>

namespace esbq {

// Base class for every error raised by the library. The CLI maps these to
// exit code 2 (data/validation error).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid (b, k) combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad scalar argument (non-positive alpha, l > u, empty tensor, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A value outside the domain an operation requires, e.g. |v| > C for the
// projection operators or an off-grid value handed to the encoder.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed code fields or tensor files.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Mixing operands quantized under different configurations.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Exact accumulator ran out of mantissa bits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace esbq

#endif  // ESBQ_ERROR_H_
