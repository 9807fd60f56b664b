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

#include "ftrbf/solvers.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ftrbf/error.hpp"
#include "ftrbf/fault_model.hpp"

namespace ftrbf {

const char* method_name(Method m) {
  switch (m) {
    case Method::Mcp: return "mcp";
    case Method::Ht: return "ht";
    case Method::L1: return "l1";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "mcp") return Method::Mcp;
  if (name == "ht") return Method::Ht;
  if (name == "l1") return Method::L1;
  fail(ErrorCode::InvalidArgument, "unknown method '" + name + "' (mcp|ht|l1)");
}

SolverConfig SolverConfig::mcp(double lambda, double gamma) {
  SolverConfig c;
  c.method = Method::Mcp;
  c.lambda = lambda;
  c.gamma = gamma;
  return c;
}

SolverConfig SolverConfig::ht(Eigen::Index k_max) {
  SolverConfig c;
  c.method = Method::Ht;
  c.k_max = k_max;
  return c;
}

SolverConfig SolverConfig::l1(double lambda) {
  SolverConfig c;
  c.method = Method::L1;
  c.lambda = lambda;
  return c;
}

void SolverConfig::validate(Eigen::Index n_centers) const {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  require(max_iter > 0, ErrorCode::InvalidArgument, "max_iter must be positive");
  require(zero_tol >= 0.0, ErrorCode::InvalidArgument,
          "zero_tol must be non-negative");
  switch (method) {
    case Method::Mcp:
      McpParams{lambda, gamma}.validate();
      break;
    case Method::L1:
      require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument,
              "l1 lambda must be positive");
      break;
    case Method::Ht:
      if (k_max < 0 || k_max > n_centers) {
        std::ostringstream os;
        os << "k_max must lie in [0, " << n_centers << "], got " << k_max;
        fail(ErrorCode::InvalidArgument, os.str());
      }
      break;
  }
}

Penalty SolverConfig::penalty() const {
  switch (method) {
    case Method::Mcp: return McpPenalty{McpParams{lambda, gamma}, prox_variant};
    case Method::L1: return L1Penalty{lambda};
    case Method::Ht: return CardinalityPenalty{k_max};
  }
  return NoPenalty{};
}

double SolverConfig::swept_value() const {
  return method == Method::Ht ? static_cast<double>(k_max) : lambda;
}

std::vector<Eigen::Index> extract_support(const Vector& u, double zero_tol) {
  require(zero_tol >= 0.0, ErrorCode::InvalidArgument,
          "zero_tol must be non-negative");
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) > zero_tol) s.push_back(i);
  return s;
}

Vector refit_on_support(const SmoothObjective& obj,
                        const std::vector<Eigen::Index>& support) {
  require(!support.empty(), ErrorCode::InvalidArgument,
          "refit needs a non-empty support");
  const auto k = static_cast<Eigen::Index>(support.size());
  Matrix h(k, k);
  Vector b(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const Eigen::Index i = support[static_cast<std::size_t>(a)];
    require(i >= 0 && i < obj.dim(), ErrorCode::InvalidArgument,
            "support index out of range");
    b(a) = obj.linear_term()(i);
    for (Eigen::Index c = 0; c < k; ++c)
      h(a, c) = obj.hessian()(i, support[static_cast<std::size_t>(c)]);
  }
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::Singular, "restricted system on the support is singular");
  }
  const Vector ws = llt.solve(b);
  require(ws.allFinite(), ErrorCode::Singular,
          "restricted system on the support is singular");
  Vector w = Vector::Zero(obj.dim());
  for (Eigen::Index a = 0; a < k; ++a) w(support[static_cast<std::size_t>(a)]) = ws(a);
  return w;
}

Vector refit_on_support(const DesignMatrix& design, const Vector& y,
                        const FaultSpec& fault,
                        const std::vector<Eigen::Index>& support) {
  auto d = std::make_shared<const DesignMatrix>(design);
  return refit_on_support(SmoothObjective(d, y, fault), support);
}

FitReport fit(const SmoothObjective& obj, const SolverConfig& config,
              const EvalSet& test) {
  config.validate(obj.dim());
  EngineConfig engine;
  engine.rho = config.rho;
  engine.tol = config.tol;
  engine.max_iter = config.max_iter;
  engine.zero_tol = config.zero_tol;

  AdmmResult run = run_admm(obj, config.penalty(), engine);

  FitReport rep;
  rep.method = config.method;
  rep.config = config;
  rep.weights = run.state.u;
  if (config.refit) {
    const auto s = extract_support(rep.weights, config.zero_tol);
    if (!s.empty()) rep.weights = refit_on_support(obj, s);
  }
  rep.support = extract_support(rep.weights, config.zero_tol);
  rep.n_centers_used = static_cast<Eigen::Index>(rep.support.size());
  rep.train_error_faulty = average_train_error(obj.design(), obj.targets(),
                                               rep.weights, obj.fault());
  if (test.design != nullptr && test.targets != nullptr) {
    rep.test_error_faulty = average_test_error(*test.design, *test.targets,
                                               rep.weights, obj.fault());
  }
  rep.converged = run.converged;
  rep.consensus_gap = (run.state.w - run.state.u).norm();
  rep.iterations = run.state.iter;
  rep.rho = run.trace.rho;
  rep.trace = std::move(run.trace);
  return rep;
}

FitReport fit(const DesignMatrix& design, const Vector& y,
              const FaultSpec& fault, const SolverConfig& config,
              const EvalSet& test) {
  auto d = std::make_shared<const DesignMatrix>(design);
  return fit(SmoothObjective(d, y, fault), config, test);
}

namespace {

const char* rho_mode_name(RhoMode m) {
  switch (m) {
    case RhoMode::Auto: return "auto";
    case RhoMode::Fixed: return "fixed";
    case RhoMode::Lipschitz: return "lipschitz";
  }
  return "?";
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string FitReport::to_json(const std::string& trace_path) const {
  nlohmann::json params = {
      {"rho_mode", rho_mode_name(config.rho.mode)},
      {"rho", rho},
      {"tol", config.tol},
      {"max_iter", config.max_iter},
      {"refit", config.refit},
      {"seed", config.seed},
  };
  switch (method) {
    case Method::Mcp:
      params["lambda"] = config.lambda;
      params["gamma"] = config.gamma;
      params["prox_variant"] =
          config.prox_variant == McpVariant::Exact ? "exact" : "unified";
      break;
    case Method::L1:
      params["lambda"] = config.lambda;
      break;
    case Method::Ht:
      params["k_max"] = config.k_max;
      break;
  }
  nlohmann::json metrics = {
      {"train_error_faulty", finite_or_null(train_error_faulty)},
      {"test_error_faulty", test_error_faulty
                                ? finite_or_null(*test_error_faulty)
                                : nlohmann::json(nullptr)},
      {"n_centers_used", n_centers_used},
      {"converged", converged},
      {"iterations", iterations},
      {"consensus_gap", finite_or_null(consensus_gap)},
  };
  nlohmann::json j = {
      {"method", method_name(method)},
      {"params", params},
      {"metrics", metrics},
      {"support", support},
      {"trace_path", trace_path},
      {"warnings", trace.warnings},
  };
  return j.dump();
}

SolverConfig ParamOverride::apply(SolverConfig base) const {
  if (lambda) base.lambda = *lambda;
  if (gamma) base.gamma = *gamma;
  if (k_max) base.k_max = *k_max;
  if (rho) base.rho = *rho;
  return base;
}

std::vector<FitReport> sweep(const DesignMatrix& design, const Vector& y,
                             const FaultSpec& fault, const SolverConfig& base,
                             const std::vector<ParamOverride>& grid,
                             const EvalSet& test, unsigned jobs) {
  require(!grid.empty(), ErrorCode::InvalidArgument, "sweep grid is empty");
  auto d = std::make_shared<const DesignMatrix>(design);
  const SmoothObjective obj(d, y, fault);

  std::vector<FitReport> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  auto work = [&](std::size_t i) {
    try {
      out[i] = fit(obj, grid[i].apply(base), test);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.size())));
  if (n_workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::size_t nearest_node_count(const std::vector<FitReport>& reports,
                               double target) {
  require(!reports.empty(), ErrorCode::InvalidArgument, "no reports");
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const double gap =
        std::abs(static_cast<double>(reports[i].n_centers_used) - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

}  // namespace ftrbf
