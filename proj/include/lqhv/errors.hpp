// Copyright 2026 The LqHV Authors
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

#include <stdexcept>
#include <string>

namespace lqhv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-Hermitian matrix, dimension mismatch, bad outcome.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (outcome space, strategy space, factorial guard) was exceeded.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Input is valid but outside the cases an operation supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Bell functional whose classical bound is zero.
class DegenerateFunctionalError : public Error {
 public:
  using Error::Error;
};

/// A numeric invariant that must hold by theory failed at runtime.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace lqhv
