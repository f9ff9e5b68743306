// Copyright 2026 The GUM Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <stdexcept>
#include <string>

namespace gum {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad shapes, non-finite entries, out-of-range ranks.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An operation was invoked on a state that does not support it, e.g. a
// low-rank step on a block without a projector.
class InvalidState : public Error {
 public:
  using Error::Error;
};

// A projector whose columns are not orthonormal.
class InvalidProjector : public Error {
 public:
  using Error::Error;
};

}  // namespace gum
