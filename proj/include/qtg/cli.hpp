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

#include <cstdint>
#include <optional>
#include <string>

#include "qtg/io.hpp"

// Job runner: config ingestion, orchestration of metric/geodesic/bounds/
// engine/oracle computations, and emission of results.json plus CSV tables.

namespace qtg::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct Options {
  std::string job_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the jobspec seed
  bool dump = false;                  // trajectory CSV dumps
};

/// Executes a validated jobspec and writes results.json + CSV files.
/// The echoed jobspec in results.json has every default made explicit, so
/// re-running it reproduces byte-identical CSV output.
json execute_job(const json& jobspec, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override, bool dump);

/// CLI entry: returns 0 on success, 1 on schema errors, 2 on numeric-domain
/// errors, 3 on convergence failures.
int run_job(const Options& options);

}  // namespace qtg::cli
