#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "udeq/dataset.hpp"
#include "udeq/objective.hpp"
#include "udeq/param_space.hpp"
#include "udeq/solver.hpp"

namespace udeq {

struct FitConfig {
  int adam_epochs = 4000;
  double adam_lr = 1e-3;
  int qn_max_iters = 1000;
  double l2_penalty = 1e-5;  // network segment only
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
  SolverConfig solver = SolverConfig::rk4();  // step resolved to span/1000

  void validate() const {
    if (adam_epochs < 0 || qn_max_iters < 0) throw ConfigError("fit: iteration counts >= 0");
    if (l2_penalty < 0.0) throw ConfigError("fit: l2_penalty >= 0 required");
    if (adam_lr <= 0.0) throw ConfigError("fit: adam_lr > 0 required");
  }
};

struct FitResult {
  Vector theta_best_raw;
  double negll_train = kNegllSentinel;
  double negll_val = kNegllSentinel;
  double negll_full = kNegllSentinel;
  // False only when the refinement stage failed outright (line-search dead
  // end) or every iterate hit the failure sentinel; budget exhaustion still
  // counts as converged.
  bool converged = false;
  std::uint64_t seed = 0;
  int adam_iters = 0;
  int qn_iters = 0;
};

// (value, gradient) oracle on the raw scale.
using ValueGradFn = std::function<std::pair<double, Vector>(const Vector&)>;
using ValueFn = std::function<double(const Vector&)>;
// Called after every accepted step with (iteration, theta, objective).
using StepCallback = std::function<void(int, const Vector&, double)>;

struct OptPoint {
  Vector theta;
  double value;
};

struct AdamResult {
  std::vector<OptPoint> trace;  // evaluated iterates, starting at theta0
  Vector theta_final;           // iterate after the last update
};

// Full-batch ADAM with bias correction (beta1 0.9, beta2 0.999, eps 1e-8).
// A step that lands on the sentinel objective is undone and skipped.
AdamResult adam_run(const ValueGradFn& fg, const Vector& theta0, int epochs, double lr,
                    const StepCallback& on_step = {});

struct QnResult {
  Vector theta;
  double value = kNegllSentinel;
  bool converged = false;
  int iters = 0;
};

struct QnOptions {
  int max_iters = 1000;
  double grad_tol = 1e-8;
  double rel_obj_tol = 1e-12;
  double armijo_c1 = 1e-4;
  int max_backtracks = 50;
};

// BFGS with Armijo backtracking; sentinel objective values are rejected by
// the line search. Returns the best iterate even on failure.
QnResult quasi_newton_run(const ValueGradFn& fg, const ValueFn& f, const Vector& theta0,
                          const QnOptions& opts, const StepCallback& on_step = {});

std::vector<OptPoint> quasi_newton_trace(const ValueGradFn& fg, const ValueFn& f,
                                         const Vector& theta0, const QnOptions& opts);

// One training schedule: seeded split, ADAM warm phase, BFGS refinement,
// best-on-validation checkpointing, metrics on the unsplit data.
FitResult fit_single(const UdeProblem& problem, const ParamSpace& space, const Dataset& data,
                     const FitConfig& cfg, const Vector& theta0);

// Convenience overload: start point sampled from the priors (network per the
// zero-init default) with the config seed.
FitResult fit_single(const UdeProblem& problem, const ParamSpace& space, const Dataset& data,
                     const FitConfig& cfg);

// Prior-sampled start point for one member (network segment per scheme).
Vector sample_start_point(const UdeProblem& problem, const ParamSpace& space,
                          std::uint64_t seed, MlpInitScheme scheme = MlpInitScheme::Zeros);

}  // namespace udeq
