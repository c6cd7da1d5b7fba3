// Copyright 2026 The lhvkit Authors.
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

namespace lhvkit {

/// Malformed input text (syntax, unknown document kind, bad version).
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string &what) : std::runtime_error(what) {}
};

/// A domain invariant does not hold (non-PSD state, incomplete POVM,
/// inconsistent model, dimension mismatch). The message names the invariant.
class InvariantError : public std::runtime_error {
  public:
    explicit InvariantError(const std::string &what)
        : std::runtime_error(what) {}
};

} // namespace lhvkit
