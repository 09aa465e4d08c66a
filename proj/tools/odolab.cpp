// Copyright 2026 The odolab Authors
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

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "odolab/runner.hpp"

int main(int argc, char** argv) {
  // The config file seeds the defaults; flags given on the command line
  // override it field by field.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = arg.substr(9);
    }
  }

  odolab::runner::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = odolab::runner::config_from_file(config_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{
      "Measure-preserving action laboratory: verifies relation, invariance, "
      "and gap claims exactly or with confidence intervals, and writes "
      "deterministic JSON-lines and CSV reports."};
  app.add_option("--config", config_path,
                 "plain key = value configuration file");
  app.add_option("--mode", cfg.mode, "bs, vaes, or all");
  app.add_option("-p", cfg.p, "denominator alphabet size");
  app.add_option("-q", cfg.q, "numerator alphabet size");
  app.add_option("-r", cfg.r, "translate multiplier");
  app.add_option("--jmax", cfg.j_max, "deepest block level");
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count");
  app.add_option("--seed", cfg.seed_base, "base seed for every suite");
  app.add_option("--primes", cfg.primes, "prime list for the product group")
      ->delimiter(',');
  app.add_option("--nmax", cfg.n_max, "deepest product-group level");
  app.add_option("--suite", cfg.suites, "restrict to the named suites")
      ->delimiter(',');
  app.add_option("--out", cfg.out,
                 "report path prefix; writes <out>.jsonl and <out>.csv");
  CLI11_PARSE(app, argc, argv);

  try {
    return odolab::runner::run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
