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

#include <CLI11.hpp>

#include "qtg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qtg: thermodynamic metric tensors, geodesic driving and "
      "low-dissipation engine optimization for slowly driven quantum "
      "systems"};
  qtg::cli::Options options;
  std::uint64_t seed = 0;
  app.add_option("--job", options.job_file, "JSON jobspec file")->required();
  app.add_option("--out", options.out_dir, "output directory")->required();
  auto* seed_opt =
      app.add_option("--seed", seed, "override the jobspec seed (default 0)");
  app.add_flag("--dump", options.dump, "write trajectory CSV dumps");
  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) options.seed = seed;
  return qtg::cli::run_job(options);
}
