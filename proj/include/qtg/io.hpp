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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtg/engines.hpp"
#include "qtg/geometry.hpp"
#include "qtg/lindblad.hpp"

// JSON/CSV serialization. Matrices are nested arrays of [re, im] pairs,
// validated on load. CSV cells carry 17 significant digits.

namespace qtg {

using json = nlohmann::json;

json matrix_to_json(const Mat& m);
Mat matrix_from_json(const json& j, const std::string& context);

json hermitian_to_json(const HermitianOperator& h);
HermitianOperator hermitian_from_json(const json& j,
                                      const std::string& context);

json bath_to_json(const BathSpec& bath);
BathSpec bath_from_json(const json& j, const std::string& context);

json path_to_json(const ControlPath& path);
ControlPath path_from_json(const json& j, const std::string& context);

json steps_to_json(const std::vector<IsothermStep>& steps);
std::vector<IsothermStep> steps_from_json(const json& j,
                                          const std::string& context);

/// Rejects objects carrying keys outside `allowed` and missing any
/// `required` key.
void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required,
                  const std::string& context);

/// 17-significant-digit decimal form, locale-independent.
std::string format_g17(double x);

/// Rows of (s, lambda..., speed, cumulative length) at `rows` uniform
/// samples.
void write_path_csv(std::ostream& out, const ControlPath& path,
                    const MetricField& field, int rows = 129);

}  // namespace qtg
