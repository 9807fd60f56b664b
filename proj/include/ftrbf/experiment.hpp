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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ftrbf/data_io.hpp"
#include "ftrbf/fault_spec.hpp"
#include "ftrbf/solvers.hpp"
#include "ftrbf/stats.hpp"

namespace ftrbf {

/// One [method] block: a solver configuration plus an optional grid over
/// its controlling parameter (lambda or k_max).
struct MethodSpec {
  std::string name;
  SolverConfig config;
  std::vector<double> grid;  // empty: a single fit with config as-is

  std::vector<ParamOverride> overrides() const;
};

struct ExperimentConfig {
  // Data source: "sinc" for the synthetic generator or a file path.
  std::string dataset = "sinc";
  std::optional<std::string> preset;
  Delimiter delimiter = Delimiter::Auto;
  bool header = false;
  int target_column = -1;
  Eigen::Index sinc_samples = 400;
  double sinc_noise = 0.05;

  double width = 1.0;
  Eigen::Index train_size = 0;  // 0: half of the rows
  NormScheme normalize = NormScheme::MinMax01;
  Eigen::Index max_centers = 0;  // 0: every training input is a center

  std::vector<FaultSpec> fault_levels{FaultSpec{}};
  int trials = 1;
  std::uint64_t base_seed = 1;
  std::optional<double> target_nodes;
  std::optional<std::string> ttest_baseline;
  bool write_traces = true;

  std::vector<MethodSpec> methods;

  void validate() const;
};

/// Parses the flat key = value format. Lines starting with '#' are comments;
/// a line "[method]" opens a method block whose keys override the globals.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Resolved configuration as JSON (the run manifest).
std::string experiment_manifest_json(const ExperimentConfig& config);

struct TrialResult {
  int trial = 0;
  std::string method;
  FaultSpec fault;
  double param = 0.0;
  Eigen::Index n_centers = 0;
  double test_mse = 0.0;
  double train_mse = 0.0;
  int iterations = 0;
  bool converged = false;
  bool selected = true;  // operating point of its (trial, method, fault) cell
  std::string status = "ok";
  double wall_ms = 0.0;
};

struct SummaryRow {
  std::string method;
  FaultSpec fault;
  int n_ok = 0;
  double mean_test_mse = 0.0;
  double mean_nodes = 0.0;
};

struct TTestRow {
  std::string method;
  std::string baseline;
  FaultSpec fault;
  PairedTTest result;
};

struct ExperimentOutcome {
  std::vector<TrialResult> results;
  std::vector<SummaryRow> summary;
  std::vector<TTestRow> ttests;
};

struct RunOptions {
  unsigned jobs = 1;
  bool verbose = false;
};

/// Runs every (trial, method, fault level) cell and writes results.csv,
/// summary.csv, ttest.csv, timing.csv, manifest.json, sweep_*.csv and
/// trace_*.csv into out_dir. A failing cell is recorded in its status column
/// and does not stop the others.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir,
                                 const RunOptions& opts = {});

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results,
                                  const ExperimentConfig& config);

struct SweepPoint {
  double param = 0.0;
  Eigen::Index n_centers = 0;
  double test_mse = 0.0;
};

/// CSV (param,n_centers_used,test_mse) sorted by node count.
void emit_sweep_curve(const std::vector<FitReport>& reports,
                      const std::filesystem::path& path);
std::vector<SweepPoint> read_sweep_curve(const std::filesystem::path& path);

/// Shortest round-trip decimal form used by every CSV writer.
std::string format_double(double v);

}  // namespace ftrbf
