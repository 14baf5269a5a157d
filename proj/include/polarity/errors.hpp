// Copyright 2026 The Polarity Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLARITY_ERRORS_HPP
#define POLARITY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polarity {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, violated preconditions. The CLI maps
// these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failures while reading or processing external data. Exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  explicit IoError(const std::string& what) : DataError("io error: " + what) {}
};

class FormatError : public DataError {
 public:
  explicit FormatError(const std::string& what)
      : DataError("format error: " + what), line_(0) {}
  FormatError(const std::string& what, std::size_t line)
      : DataError("format error at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimMismatch : public DataError {
 public:
  explicit DimMismatch(const std::string& what)
      : DataError("dimension mismatch: " + what) {}
};

class ZeroVector : public ValidationError {
 public:
  ZeroVector() : ValidationError("cannot normalize a zero vector") {}
};

class BadFractions : public ValidationError {
 public:
  explicit BadFractions(const std::string& what)
      : ValidationError("bad split fractions: " + what) {}
};

class BadSpec : public ValidationError {
 public:
  explicit BadSpec(const std::string& what)
      : ValidationError("bad specification: " + what) {}
};

class BadLabel : public ValidationError {
 public:
  explicit BadLabel(const std::string& what)
      : ValidationError("bad label: " + what) {}
};

class ShapeMismatch : public ValidationError {
 public:
  explicit ShapeMismatch(const std::string& what)
      : ValidationError("shape mismatch: " + what) {}
};

class LengthMismatch : public ValidationError {
 public:
  explicit LengthMismatch(const std::string& what)
      : ValidationError("length mismatch: " + what) {}
};

class EmptyDataset : public ValidationError {
 public:
  explicit EmptyDataset(const std::string& what = "dataset is empty")
      : ValidationError(what) {}
};

class EmptyStats : public ValidationError {
 public:
  EmptyStats() : ValidationError("word statistics are empty") {}
};

class EmptyReview : public ValidationError {
 public:
  explicit EmptyReview(const std::string& what = "no token contributes to the review vector")
      : ValidationError(what) {}
};

class EmptySplit : public ValidationError {
 public:
  explicit EmptySplit(const std::string& what) : ValidationError(what) {}
};

class EmptyValidation : public ValidationError {
 public:
  explicit EmptyValidation(const std::string& what = "validation set is empty")
      : ValidationError(what) {}
};

class InconsistentClasses : public ValidationError {
 public:
  explicit InconsistentClasses(const std::string& what)
      : ValidationError("inconsistent class counts: " + what) {}
};

class ConfigError : public ValidationError {
 public:
  explicit ConfigError(const std::string& what)
      : ValidationError("config error: " + what) {}
};

}  // namespace polarity

#endif  // POLARITY_ERRORS_HPP
