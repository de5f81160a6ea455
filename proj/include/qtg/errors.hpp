// Copyright 2026 The qtg authors
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

namespace qtg {

/// Input failed structural validation (shape, hermiticity, schema).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric-domain failure: rank-deficient state, degenerate spectrum,
/// spectral-validity violation, detailed-balance violation.
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure exhausted its budget without meeting its tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtg
