// Copyright 2026 The Subsamp Authors.
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

namespace subsamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (negative node ids, unreadable files, bad label files).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its admissible range (target > n, K > n, B = 0, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A Pearson correlation was requested where one of the vectors is constant.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

/// The requested sampling scheme has no closed form (BFS, DFS).
class UnsupportedScheme : public Error {
 public:
  using Error::Error;
};

}  // namespace subsamp
