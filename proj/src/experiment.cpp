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

#include "ftrbf/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ftrbf/error.hpp"
#include "ftrbf/fault_model.hpp"

namespace ftrbf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Parse, "config key '" + key + "': '" + v + "' is not a number");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos == v.size()) return i;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Parse, "config key '" + key + "': '" + v + "' is not an integer");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorCode::Parse, "config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) out.push_back(parse_real(key, tok));
  require(!out.empty(), ErrorCode::Parse, "config key '" + key + "' is empty");
  return out;
}

std::vector<FaultSpec> parse_fault_levels(const std::string& v) {
  std::vector<FaultSpec> out;
  for (const auto& tok : split_list(v)) {
    FaultSpec f;
    if (tok == "none") {
      out.push_back(f);
      continue;
    }
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      f.open_prob = f.mult_var = parse_real("fault_levels", tok);
    } else {
      f.open_prob = parse_real("fault_levels", tok.substr(0, colon));
      f.mult_var = parse_real("fault_levels", tok.substr(colon + 1));
    }
    f.validate();
    out.push_back(f);
  }
  require(!out.empty(), ErrorCode::Parse, "fault_levels is empty");
  return out;
}

RhoPolicy parse_rho(const std::string& v, std::optional<double> safety) {
  if (v == "auto") return RhoPolicy::automatic(safety.value_or(1.1));
  if (v == "lipschitz") return RhoPolicy::lipschitz(safety.value_or(1.0));
  const double r = parse_real("rho", v);
  require(r > 0.0, ErrorCode::Parse, "rho must be positive, 'auto' or 'lipschitz'");
  return RhoPolicy::fixed(r);
}

const std::set<std::string> kGlobalKeys = {
    "dataset",  "preset",       "delimiter",   "header",      "target_column",
    "sinc_samples", "sinc_noise", "width",     "train_size",  "normalize",
    "max_centers", "fault_levels", "trials",   "seed",        "tol",
    "max_iter", "rho",          "rho_safety",  "lambda",      "gamma",
    "k_max",    "prox_variant", "refit",       "target_nodes", "ttest_baseline",
    "traces",   "methods"};

const std::set<std::string> kMethodKeys = {
    "name", "method", "lambda", "gamma", "k_max", "prox_variant", "refit",
    "tol",  "max_iter", "rho",  "rho_safety"};

const std::string* find_key(const KeyValues& kv, const std::string& key) {
  const std::string* hit = nullptr;
  for (const auto& [k, v] : kv)
    if (k == key) hit = &v;  // last assignment wins
  return hit;
}

MethodSpec resolve_method(const KeyValues& block, const KeyValues& global,
                          const std::string& fallback_method) {
  auto get = [&](const std::string& key) -> const std::string* {
    if (const auto* v = find_key(block, key)) return v;
    if (key == "name") return nullptr;
    return find_key(global, key);
  };
  MethodSpec spec;
  const std::string* m = find_key(block, "method");
  const std::string type = m ? *m : fallback_method;
  require(!type.empty(), ErrorCode::Parse, "method block without 'method = ...'");
  spec.config.method = parse_method(type);
  spec.name = get("name") ? *get("name") : type;

  SolverConfig& c = spec.config;
  if (const auto* v = get("tol")) c.tol = parse_real("tol", *v);
  if (const auto* v = get("max_iter"))
    c.max_iter = static_cast<int>(parse_int("max_iter", *v));
  std::optional<double> safety;
  if (const auto* v = get("rho_safety")) safety = parse_real("rho_safety", *v);
  c.rho = parse_rho(get("rho") ? *get("rho") : "auto", safety);
  if (const auto* v = get("refit")) c.refit = parse_bool("refit", *v);
  if (const auto* v = get("gamma")) c.gamma = parse_real("gamma", *v);
  if (const auto* v = get("prox_variant")) {
    if (*v == "exact")
      c.prox_variant = McpVariant::Exact;
    else if (*v == "unified")
      c.prox_variant = McpVariant::Unified;
    else
      fail(ErrorCode::Parse, "prox_variant must be 'exact' or 'unified'");
  }

  const std::string grid_key = c.method == Method::Ht ? "k_max" : "lambda";
  const auto* gv = get(grid_key);
  require(gv != nullptr, ErrorCode::Parse,
          "method '" + spec.name + "' needs '" + grid_key + "'");
  const auto values = parse_real_list(grid_key, *gv);
  if (c.method == Method::Ht) {
    for (double k : values)
      require(k >= 0 && std::floor(k) == k, ErrorCode::Parse,
              "k_max values must be non-negative integers");
    c.k_max = static_cast<Eigen::Index>(values.front());
  } else {
    c.lambda = values.front();
  }
  if (values.size() > 1) spec.grid = values;
  return spec;
}

}  // namespace

std::vector<ParamOverride> MethodSpec::overrides() const {
  std::vector<ParamOverride> out;
  if (grid.empty()) {
    out.emplace_back();
    return out;
  }
  for (double v : grid) {
    ParamOverride o;
    if (config.method == Method::Ht)
      o.k_max = static_cast<Eigen::Index>(v);
    else
      o.lambda = v;
    out.push_back(o);
  }
  return out;
}

void ExperimentConfig::validate() const {
  require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");
  require(!methods.empty(), ErrorCode::InvalidArgument,
          "experiment needs at least one method");
  require(width > 0.0, ErrorCode::InvalidArgument, "width must be positive");
  require(!fault_levels.empty(), ErrorCode::InvalidArgument,
          "experiment needs at least one fault level");
  for (const auto& f : fault_levels) f.validate();
  std::set<std::string> names;
  for (const auto& m : methods) {
    require(names.insert(m.name).second, ErrorCode::InvalidArgument,
            "duplicate method name '" + m.name + "'");
  }
  if (ttest_baseline) {
    require(names.count(*ttest_baseline) == 1, ErrorCode::InvalidArgument,
            "ttest_baseline '" + *ttest_baseline + "' is not a method name");
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  KeyValues global;
  std::vector<KeyValues> blocks;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_copy(line);
    if (line.empty()) continue;
    if (line == "[method]") {
      blocks.emplace_back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Parse,
           "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim_copy(line.substr(0, eq));
    const std::string value = trim_copy(line.substr(eq + 1));
    const bool in_block = !blocks.empty();
    const auto& allowed = in_block ? kMethodKeys : kGlobalKeys;
    if (allowed.count(key) == 0) {
      fail(ErrorCode::Parse, "config line " + std::to_string(line_no) +
                                 ": unknown key '" + key + "'" +
                                 (in_block ? " in [method] block" : ""));
    }
    (in_block ? blocks.back() : global).emplace_back(key, value);
  }

  ExperimentConfig cfg;
  if (const auto* v = find_key(global, "preset")) {
    const DatasetPreset p = table1_preset(*v);
    cfg.preset = p.name;
    cfg.width = p.width;
    cfg.train_size = p.train_size;
  }
  if (const auto* v = find_key(global, "dataset")) cfg.dataset = *v;
  if (const auto* v = find_key(global, "delimiter")) cfg.delimiter = parse_delimiter(*v);
  if (const auto* v = find_key(global, "header")) cfg.header = parse_bool("header", *v);
  if (const auto* v = find_key(global, "target_column"))
    cfg.target_column = static_cast<int>(parse_int("target_column", *v));
  if (const auto* v = find_key(global, "sinc_samples"))
    cfg.sinc_samples = parse_int("sinc_samples", *v);
  if (const auto* v = find_key(global, "sinc_noise"))
    cfg.sinc_noise = parse_real("sinc_noise", *v);
  if (const auto* v = find_key(global, "width")) cfg.width = parse_real("width", *v);
  if (const auto* v = find_key(global, "train_size"))
    cfg.train_size = parse_int("train_size", *v);
  if (const auto* v = find_key(global, "normalize")) cfg.normalize = parse_norm_scheme(*v);
  if (const auto* v = find_key(global, "max_centers"))
    cfg.max_centers = parse_int("max_centers", *v);
  if (const auto* v = find_key(global, "fault_levels"))
    cfg.fault_levels = parse_fault_levels(*v);
  if (const auto* v = find_key(global, "trials"))
    cfg.trials = static_cast<int>(parse_int("trials", *v));
  if (const auto* v = find_key(global, "seed"))
    cfg.base_seed = static_cast<std::uint64_t>(parse_int("seed", *v));
  if (const auto* v = find_key(global, "target_nodes"))
    cfg.target_nodes = parse_real("target_nodes", *v);
  if (const auto* v = find_key(global, "ttest_baseline")) cfg.ttest_baseline = *v;
  if (const auto* v = find_key(global, "traces"))
    cfg.write_traces = parse_bool("traces", *v);

  if (blocks.empty()) {
    const auto* list = find_key(global, "methods");
    require(list != nullptr, ErrorCode::Parse,
            "config defines no methods ('methods = ...' or [method] blocks)");
    for (const auto& m : split_list(*list)) blocks.push_back({{"method", m}});
  }
  std::map<std::string, int> seen;
  for (const auto& b : blocks) {
    MethodSpec spec = resolve_method(b, global, "");
    spec.config.seed = cfg.base_seed;
    if (find_key(b, "name") == nullptr) {
      const int count = ++seen[spec.name];
      if (count > 1) spec.name += "#" + std::to_string(count);
    }
    cfg.methods.push_back(std::move(spec));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

namespace {

const char* rho_mode_label(RhoMode m) {
  switch (m) {
    case RhoMode::Auto: return "auto";
    case RhoMode::Fixed: return "fixed";
    case RhoMode::Lipschitz: return "lipschitz";
  }
  return "?";
}

}  // namespace

std::string experiment_manifest_json(const ExperimentConfig& c) {
  nlohmann::json faults = nlohmann::json::array();
  for (const auto& f : c.fault_levels)
    faults.push_back({{"open_prob", f.open_prob}, {"mult_var", f.mult_var}});
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : c.methods) {
    const auto& s = m.config;
    methods.push_back({
        {"name", m.name},
        {"method", method_name(s.method)},
        {"lambda", s.lambda},
        {"gamma", s.gamma},
        {"k_max", s.k_max},
        {"grid", m.grid},
        {"rho_mode", rho_mode_label(s.rho.mode)},
        {"rho_value", s.rho.value},
        {"rho_safety", s.rho.safety},
        {"tol", s.tol},
        {"max_iter", s.max_iter},
        {"prox_variant", s.prox_variant == McpVariant::Exact ? "exact" : "unified"},
        {"refit", s.refit},
    });
  }
  nlohmann::json j = {
      {"dataset", c.dataset},
      {"preset", c.preset ? nlohmann::json(*c.preset) : nlohmann::json(nullptr)},
      {"target_column", c.target_column},
      {"header", c.header},
      {"sinc_samples", c.sinc_samples},
      {"sinc_noise", c.sinc_noise},
      {"width", c.width},
      {"train_size", c.train_size},
      {"normalize", norm_scheme_name(c.normalize)},
      {"max_centers", c.max_centers},
      {"fault_levels", faults},
      {"trials", c.trials},
      {"seed", c.base_seed},
      {"target_nodes",
       c.target_nodes ? nlohmann::json(*c.target_nodes) : nlohmann::json(nullptr)},
      {"ttest_baseline",
       c.ttest_baseline ? nlohmann::json(*c.ttest_baseline) : nlohmann::json(nullptr)},
      {"methods", methods},
  };
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Sweep curves

void emit_sweep_curve(const std::vector<FitReport>& reports,
                      const std::filesystem::path& path) {
  require(!reports.empty(), ErrorCode::InvalidArgument, "no reports to emit");
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return reports[a].n_centers_used < reports[b].n_centers_used;
  });
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << "param,n_centers_used,test_mse\n";
  for (std::size_t i : order) {
    const auto& r = reports[i];
    const double mse = r.test_error_faulty ? *r.test_error_faulty : r.train_error_faulty;
    out << format_double(r.config.swept_value()) << ',' << r.n_centers_used << ','
        << format_double(mse) << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::vector<SweepPoint> read_sweep_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  require(trim_copy(line) == "param,n_centers_used,test_mse", ErrorCode::Parse,
          path.string() + ": unexpected sweep header");
  std::vector<SweepPoint> out;
  while (std::getline(in, line)) {
    if (trim_copy(line).empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    std::getline(ls, c, ',');
    out.push_back({parse_real("param", a), parse_int("n_centers_used", b),
                   parse_real("test_mse", c)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runner

namespace {

struct TrialData {
  std::shared_ptr<const DesignMatrix> train;
  Vector y_train;
  DesignMatrix test;
  Vector y_test;
};

struct CellJob {
  std::size_t fault_idx = 0;
  std::size_t method_idx = 0;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out + "\"";
}

std::string file_tag(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

Dataset load_source(const ExperimentConfig& c) {
  if (c.dataset == "sinc")
    return synthetic_sinc(c.sinc_samples, c.sinc_noise, c.base_seed);
  LoadOptions opts;
  opts.delimiter = c.delimiter;
  opts.header = c.header;
  opts.target_column = c.target_column;
  return load_delimited(c.dataset, opts);
}

TrialData prepare_trial(const ExperimentConfig& c, const Dataset& data, int trial) {
  const std::uint64_t seed = c.base_seed + static_cast<std::uint64_t>(trial);
  const Eigen::Index train_size = c.train_size > 0 ? c.train_size : data.rows() / 2;
  auto [train, test] = split(data, SplitSpec{train_size, seed});
  const Dataset train_n = normalize(train, c.normalize);
  const Dataset test_n = apply_normalization(test, train_n.normalization);
  const Matrix centers = subsample_rows(train_n.inputs, c.max_centers, seed);
  auto design = std::make_shared<const DesignMatrix>(
      DesignMatrix::build(train_n.inputs, centers, c.width));
  DesignMatrix test_design = design->evaluate(test_n.inputs);
  return {design, train_n.targets, std::move(test_design), test_n.targets};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results,
                                  const ExperimentConfig& config) {
  std::vector<SummaryRow> out;
  for (const auto& f : config.fault_levels) {
    for (const auto& m : config.methods) {
      SummaryRow row;
      row.method = m.name;
      row.fault = f;
      double mse = 0.0;
      double nodes = 0.0;
      for (const auto& r : results) {
        if (r.method != m.name || !r.selected || r.status != "ok") continue;
        if (r.fault.open_prob != f.open_prob || r.fault.mult_var != f.mult_var) continue;
        ++row.n_ok;
        mse += r.test_mse;
        nodes += static_cast<double>(r.n_centers);
      }
      if (row.n_ok > 0) {
        row.mean_test_mse = mse / row.n_ok;
        row.mean_nodes = nodes / row.n_ok;
      } else {
        row.mean_test_mse = row.mean_nodes = std::nan("");
      }
      out.push_back(row);
    }
  }
  return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir,
                                 const RunOptions& opts) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "manifest.json", experiment_manifest_json(config) + "\n");

  const Dataset data = load_source(config);
  const std::size_t n_faults = config.fault_levels.size();
  const std::size_t n_methods = config.methods.size();

  // rows[trial][fault][method][grid point]
  using CellRows = std::vector<TrialResult>;
  std::vector<std::vector<std::vector<CellRows>>> rows(
      static_cast<std::size_t>(config.trials),
      std::vector<std::vector<CellRows>>(n_faults, std::vector<CellRows>(n_methods)));
  std::mutex log_mutex;

  for (int t = 0; t < config.trials; ++t) {
    std::optional<TrialData> td;
    std::string trial_error;
    try {
      td = prepare_trial(config, data, t);
    } catch (const std::exception& e) {
      trial_error = e.what();
    }

    std::vector<std::unique_ptr<SmoothObjective>> objectives(n_faults);
    std::vector<std::string> objective_errors(n_faults);
    if (td) {
      for (std::size_t f = 0; f < n_faults; ++f) {
        try {
          objectives[f] = std::make_unique<SmoothObjective>(td->train, td->y_train,
                                                            config.fault_levels[f]);
        } catch (const std::exception& e) {
          objective_errors[f] = e.what();
        }
      }
    }

    std::vector<CellJob> jobs;
    for (std::size_t f = 0; f < n_faults; ++f)
      for (std::size_t m = 0; m < n_methods; ++m) jobs.push_back({f, m});

    auto run_cell = [&](const CellJob& job) {
      const MethodSpec& spec = config.methods[job.method_idx];
      const FaultSpec& fault = config.fault_levels[job.fault_idx];
      const auto grid = spec.overrides();
      CellRows& cell = rows[static_cast<std::size_t>(t)][job.fault_idx][job.method_idx];
      std::vector<FitReport> reports;
      std::vector<std::size_t> ok_points;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        TrialResult r;
        r.trial = t;
        r.method = spec.name;
        r.fault = fault;
        const SolverConfig sc = grid[g].apply(spec.config);
        r.param = sc.swept_value();
        r.selected = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          if (!td) fail(ErrorCode::InvalidArgument, "trial setup failed: " + trial_error);
          if (!objectives[job.fault_idx])
            fail(ErrorCode::InvalidArgument, objective_errors[job.fault_idx]);
          const EvalSet test{&td->test, &td->y_test};
          FitReport rep = fit(*objectives[job.fault_idx], sc, test);
          r.n_centers = rep.n_centers_used;
          r.test_mse = *rep.test_error_faulty;
          r.train_mse = rep.train_error_faulty;
          r.iterations = rep.iterations;
          r.converged = rep.converged;
          if (config.write_traces) {
            std::ostringstream name;
            name << "trace_" << file_tag(spec.name) << "_f" << job.fault_idx << "_t" << t
                 << "_p" << g << ".csv";
            std::ofstream tf(out_dir / name.str());
            rep.trace.write_csv(tf);
          }
          ok_points.push_back(reports.size());
          reports.push_back(std::move(rep));
        } catch (const std::exception& e) {
          r.status = std::string("error: ") + e.what();
          r.test_mse = r.train_mse = std::nan("");
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        cell.push_back(r);
      }

      // Operating point of the cell.
      if (!reports.empty()) {
        std::size_t pick = 0;
        if (config.target_nodes) {
          pick = nearest_node_count(reports, *config.target_nodes);
        } else {
          for (std::size_t i = 1; i < reports.size(); ++i)
            if (*reports[i].test_error_faulty < *reports[pick].test_error_faulty) pick = i;
        }
        std::size_t seen = 0;
        for (auto& r : cell) {
          if (r.status != "ok") continue;
          r.selected = (seen++ == pick);
        }
        if (grid.size() > 1) {
          std::ostringstream name;
          name << "sweep_" << file_tag(spec.name) << "_f" << job.fault_idx << "_t" << t
               << ".csv";
          emit_sweep_curve(reports, out_dir / name.str());
        }
      }
      if (opts.verbose) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "[trial " << t << "] " << spec.name << " fault=("
                  << fault.open_prob << "," << fault.mult_var << ") points="
                  << grid.size() << " ok=" << reports.size() << '\n';
      }
    };

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(jobs.size())));
    if (n_workers == 1) {
      for (const auto& j : jobs) run_cell(j);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < jobs.size(); i = next++) run_cell(jobs[i]);
        });
      }
      for (auto& th : pool) th.join();
    }
  }

  ExperimentOutcome outcome;
  for (const auto& trial : rows)
    for (const auto& fault : trial)
      for (const auto& cell : fault)
        for (const auto& r : cell) outcome.results.push_back(r);
  outcome.summary = summarize(outcome.results, config);

  // Paired t-tests against the baseline method.
  std::optional<std::string> baseline = config.ttest_baseline;
  if (!baseline) {
    for (const auto& m : config.methods) {
      if (m.config.method == Method::L1) {
        baseline = m.name;
        break;
      }
    }
  }
  if (baseline) {
    for (std::size_t f = 0; f < n_faults; ++f) {
      for (const auto& m : config.methods) {
        if (m.name == *baseline) continue;
        std::vector<double> a, b;
        for (int t = 0; t < config.trials; ++t) {
          const TrialResult* ra = nullptr;
          const TrialResult* rb = nullptr;
          for (std::size_t mi = 0; mi < n_methods; ++mi) {
            for (const auto& r : rows[static_cast<std::size_t>(t)][f][mi]) {
              if (!r.selected || r.status != "ok") continue;
              if (r.method == m.name) ra = &r;
              if (r.method == *baseline) rb = &r;
            }
          }
          if (ra && rb) {
            a.push_back(ra->test_mse);
            b.push_back(rb->test_mse);
          }
        }
        if (a.size() >= 2)
          outcome.ttests.push_back({m.name, *baseline, config.fault_levels[f],
                                    paired_t_test(a, b)});
      }
    }
  }

  std::ostringstream res;
  res << "trial,method,open_prob,mult_var,param,n_centers,test_mse,train_mse,"
         "iterations,converged,selected,status\n";
  std::ostringstream timing;
  timing << "trial,method,open_prob,mult_var,param,wall_ms\n";
  for (const auto& r : outcome.results) {
    res << r.trial << ',' << csv_field(r.method) << ',' << format_double(r.fault.open_prob)
        << ',' << format_double(r.fault.mult_var) << ',' << format_double(r.param) << ','
        << r.n_centers << ',' << format_double(r.test_mse) << ','
        << format_double(r.train_mse) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << (r.selected ? 1 : 0) << ','
        << csv_field(r.status) << '\n';
    timing << r.trial << ',' << csv_field(r.method) << ','
           << format_double(r.fault.open_prob) << ',' << format_double(r.fault.mult_var)
           << ',' << format_double(r.param) << ',' << format_double(r.wall_ms) << '\n';
  }
  write_text(out_dir / "results.csv", res.str());
  write_text(out_dir / "timing.csv", timing.str());

  std::ostringstream sum;
  sum << "method,open_prob,mult_var,n_ok,mean_test_mse,mean_nodes\n";
  for (const auto& s : outcome.summary) {
    sum << csv_field(s.method) << ',' << format_double(s.fault.open_prob) << ','
        << format_double(s.fault.mult_var) << ',' << s.n_ok << ','
        << format_double(s.mean_test_mse) << ',' << format_double(s.mean_nodes) << '\n';
  }
  write_text(out_dir / "summary.csv", sum.str());

  std::ostringstream tt;
  tt << "method,baseline,open_prob,mult_var,n,mean_diff,std_dev,t_value,"
        "p_two_sided,p_one_sided,ci95_low,ci95_high,critical_t_one_tailed\n";
  for (const auto& row : outcome.ttests) {
    const auto& r = row.result;
    tt << csv_field(row.method) << ',' << csv_field(row.baseline) << ','
       << format_double(row.fault.open_prob) << ',' << format_double(row.fault.mult_var)
       << ',' << r.n << ',' << format_double(r.mean_diff) << ','
       << format_double(r.std_dev) << ',' << format_double(r.t_value) << ','
       << format_double(r.p_two_sided) << ',' << format_double(r.p_one_sided) << ','
       << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
       << format_double(r.critical_one_tailed) << '\n';
  }
  write_text(out_dir / "ttest.csv", tt.str());
  return outcome;
}

}  // namespace ftrbf
