/*
 * Copyright 2026 The ftrbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// ftrbf: batch experiment runner and data utilities. Links only the C API.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "ftrbf/ftrbf.h"

namespace {

int report(ftrbf_status s, const char* what) {
  if (s == FTRBF_OK) return 0;
  std::fprintf(stderr, "ftrbf: %s: %s (%s)\n", what, ftrbf_last_error(),
               ftrbf_status_string(s));
  return s == FTRBF_ERR_IO ? 3 : 2;
}

int run_normalize(const std::string& in, const std::string& out, const std::string& scheme,
                  const std::string& delimiter, int target_column, bool header) {
  ftrbf_dataset* ds = nullptr;
  if (int rc = report(ftrbf_dataset_load(in.c_str(), delimiter.c_str(), target_column,
                                         header ? 1 : 0, &ds),
                      "load"))
    return rc;
  int rc = report(ftrbf_dataset_normalize(ds, scheme.c_str()), "normalize");
  if (rc == 0) rc = report(ftrbf_dataset_write(ds, out.c_str()), "write");
  if (rc == 0) {
    const std::string sidecar = out + ".norm.json";
    std::ofstream js(sidecar);
    js << ftrbf_dataset_normalization_json(ds) << '\n';
    if (!js) {
      std::fprintf(stderr, "ftrbf: cannot write %s\n", sidecar.c_str());
      rc = 3;
    }
  }
  ftrbf_dataset_destroy(ds);
  return rc;
}

int run_presets() {
  for (const char* name : {"ABA", "ASN", "HOUSING", "CON", "ENERGY", "WQW"}) {
    double width = 0;
    size_t train = 0, test = 0, feats = 0;
    if (int rc = report(ftrbf_preset(name, &width, &train, &test, &feats), "preset"))
      return rc;
    std::printf("%-8s width=%g train=%zu test=%zu features=%zu\n", name, width, train, test,
                feats);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-aware sparse RBF training (ADMM with MCP, hard threshold and l1)"};
  app.set_version_flag("--version", std::string(ftrbf_version()));

  std::string config, out_dir = "ftrbf_out";
  unsigned jobs = 1;
  bool verbose = false;
  app.add_option("--config", config, "Experiment config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads per trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--verbose", verbose, "Log each finished cell to stderr");

  auto* check = app.add_subcommand("check", "Parse and validate a config without running it");
  std::string check_path;
  check->add_option("config", check_path, "Config file")->required();

  auto* norm = app.add_subcommand("normalize", "Write a normalized copy of a dataset");
  std::string n_in, n_out, scheme = "minmax01", delimiter = "auto";
  int target_column = -1;
  bool header = false;
  norm->add_option("input", n_in, "Delimited text file")->required()->check(CLI::ExistingFile);
  norm->add_option("output", n_out, "Output CSV (sidecar: <output>.norm.json)")->required();
  norm->add_option("--scheme", scheme, "none | minmax01 | zscore")->capture_default_str();
  norm->add_option("--delimiter", delimiter, "auto | comma | whitespace")
      ->capture_default_str();
  norm->add_option("--target-column", target_column, "0-based, negative = last")
      ->capture_default_str();
  norm->add_flag("--header", header, "First non-comment line is a header");

  auto* presets = app.add_subcommand("presets", "List the built-in dataset presets");

  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);

  if (*check) {
    if (int rc = report(ftrbf_experiment_validate(check_path.c_str()), "config")) return rc;
    std::printf("%s: ok\n", check_path.c_str());
    return 0;
  }
  if (*norm) return run_normalize(n_in, n_out, scheme, delimiter, target_column, header);
  if (*presets) return run_presets();

  if (config.empty()) {
    std::fprintf(stderr, "ftrbf: --config is required\n%s", app.help().c_str());
    return 1;
  }
  if (int rc = report(ftrbf_experiment_run(config.c_str(), out_dir.c_str(), jobs, verbose),
                      "experiment"))
    return rc;
  if (verbose) std::fprintf(stderr, "ftrbf: results in %s\n", out_dir.c_str());
  return 0;
}
