#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "udeq/dataset.hpp"
#include "udeq/gradient.hpp"
#include "udeq/noise.hpp"
#include "udeq/prior.hpp"
#include "udeq/problems.hpp"
#include "udeq/solver.hpp"

namespace udeq {

inline SolverConfig training_solver(const UdeProblem& problem, SolverConfig cfg) {
  if (cfg.method == SolverConfig::Method::Rk4Fixed && cfg.fixed_step <= 0.0)
    cfg.fixed_step = (problem.t1 - problem.t0) / 1000.0;
  return cfg;
}

// One UDE simulation over the data grid plus the noise-model evaluation,
// generic over the scalar so the same code yields values and exact gradients
// of the discretization. Failures (integration breakdown, non-positive
// negbin mean, overflow) are flagged explicitly: arbitrarily large but
// finite negLL values are legitimate objective values, not failures.
template <class S>
struct NegllParts {
  S train{0.0};
  double val = 0.0;
  bool failed = false;

  void fail() {
    train = S(std::numeric_limits<double>::infinity());
    val = std::numeric_limits<double>::infinity();
    failed = true;
  }
};

template <class S>
NegllParts<S> negll_split_core(const UdeProblem& problem, const ProblemLayout& lay,
                               const Dataset& data, std::span<const S> theta,
                               const SolverConfig& cfg, std::span<const int> train_idx,
                               std::span<const int> val_idx) {
  NegllParts<S> parts;
  std::vector<S> x0(problem.n_x);
  for (int i = 0; i < problem.n_x; ++i) x0[i] = S(problem.x0[i]);
  const UdeRhs<S> rhs(problem, lay, theta);
  const auto sol = integrate_core<S>(rhs, std::span<const S>(x0), problem.t0,
                                     std::span<const double>(data.times), cfg);
  if (!sol.success) {
    parts.fail();
    return parts;
  }
  const int n_y = problem.n_y();
  const S noise_nat = transform_to_natural(lay.noise_tf, theta[lay.noise_off]);
  const bool gaussian = problem.noise_kind == NoiseKind::Gaussian;
  const S d = gaussian ? S(0.0) : S(1.0 / noise_nat);  // noise_nat is p = 1/d
  bool bad = false;
  auto term = [&](int row, int col) -> S {
    const S& pred = sol.states[static_cast<std::size_t>(row) * problem.n_x +
                               problem.observable[col]];
    const double obs = data.observations(row, col);
    if (gaussian) return negll_gaussian_term<S>(pred, obs, noise_nat);
    if (value_of(pred) <= 0.0) {  // penalty path for non-positive means
      bad = true;
      return S(0.0);
    }
    return negll_negbin_term<S>(pred, obs, d);
  };
  for (int row : train_idx)
    for (int j = 0; j < n_y; ++j) {
      const S t = term(row, j);
      if (bad || !std::isfinite(value_of(t))) {
        parts.fail();
        return parts;
      }
      parts.train += t;
    }
  for (int row : val_idx)
    for (int j = 0; j < n_y; ++j) {
      const double t = value_of(term(row, j));
      if (bad || !std::isfinite(t)) {
        parts.val = std::numeric_limits<double>::infinity();
        return parts;
      }
      parts.val += t;
    }
  return parts;
}

// Train/validation negLL evaluator with an L2 penalty on the network segment.
// The penalty enters the optimization objective only, never the reported
// negLL metrics.
class FitEvaluator {
 public:
  FitEvaluator(const UdeProblem& problem, const ParamSpace& space, const Dataset& data,
               SolverConfig solver, double l2_penalty, std::vector<int> train_idx,
               std::vector<int> val_idx)
      : problem_(problem),
        lay_(make_layout(problem, space)),
        data_(data),
        solver_(training_solver(problem, solver)),
        l2_(l2_penalty),
        train_idx_(std::move(train_idx)),
        val_idx_(std::move(val_idx)) {}

  struct Eval {
    double objective = std::numeric_limits<double>::infinity();
    double negll_train = std::numeric_limits<double>::infinity();
    double negll_val = std::numeric_limits<double>::infinity();
    Vector grad;
  };

  template <class S>
  S objective_core(std::span<const S> theta, double* out_train, double* out_val) const {
    const auto parts = negll_split_core<S>(problem_, lay_, data_, theta, solver_,
                                           std::span<const int>(train_idx_),
                                           std::span<const int>(val_idx_));
    if (out_train) *out_train = value_of(parts.train);
    if (out_val) *out_val = parts.val;
    if (parts.failed) return S(kNegllSentinel);
    S obj = parts.train;
    if (l2_ > 0.0) {
      S ss(0.0);
      for (int i = 0; i < lay_.net_len; ++i) {
        const S& w = theta[lay_.net_off + i];
        ss += w * w;
      }
      obj += l2_ * ss;
    }
    return obj;
  }

  Eval value(const Vector& theta) const {
    Eval e;
    e.objective = value_of(objective_core<double>(
        std::span<const double>(theta.data(), theta.size()), &e.negll_train, &e.negll_val));
    return e;
  }

  Eval value_and_grad(const Vector& theta) const {
    Eval e;
    double train = std::numeric_limits<double>::infinity();
    double val_negll = std::numeric_limits<double>::infinity();
    auto [val, grad] = value_and_gradient(
        [&](auto span_theta) {
          using SpanT = decltype(span_theta);
          using S = std::remove_cv_t<typename SpanT::element_type>;
          return objective_core<S>(span_theta, &train, &val_negll);
        },
        theta);
    e.objective = val;
    e.grad = std::move(grad);
    e.negll_train = train;
    e.negll_val = val_negll;
    return e;
  }

  // Negative log-likelihood over the full (unsplit) dataset, penalty excluded.
  double negll_full(const Vector& theta) const {
    std::vector<int> all(data_.n_t());
    for (int i = 0; i < data_.n_t(); ++i) all[i] = i;
    const auto parts = negll_split_core<double>(
        problem_, lay_, data_, std::span<const double>(theta.data(), theta.size()), solver_,
        std::span<const int>(all), std::span<const int>());
    return value_of(parts.train);
  }

  const SolverConfig& solver() const { return solver_; }

 private:
  const UdeProblem& problem_;
  ProblemLayout lay_;
  const Dataset& data_;
  SolverConfig solver_;
  double l2_;
  std::vector<int> train_idx_;
  std::vector<int> val_idx_;
};

// Unnormalized log posterior (Eq.-4 style): log-likelihood + log-prior, with
// simulation failures mapped to the sentinel so samplers survive bad regions.
class PosteriorDensity {
 public:
  PosteriorDensity(const UdeProblem& problem, const ParamSpace& space, const Dataset& data,
                   SolverConfig solver)
      : problem_(problem),
        space_(space),
        lay_(make_layout(problem, space)),
        data_(data),
        solver_(training_solver(problem, solver)) {
    all_idx_.resize(data.n_t());
    for (int i = 0; i < data.n_t(); ++i) all_idx_[i] = i;
  }

  int dim() const { return space_.total_dim(); }

  template <class S>
  S log_post_core(std::span<const S> theta) const {
    const S lp = log_prior_core<S>(space_, theta);
    if (is_sentinel_logpost(value_of(lp))) return S(kLogPostSentinel);
    const auto parts = negll_split_core<S>(problem_, lay_, data_, theta, solver_,
                                           std::span<const int>(all_idx_),
                                           std::span<const int>());
    if (parts.failed) return S(kLogPostSentinel);
    return lp - parts.train;
  }

  double log_post(const Vector& theta) const {
    check_dim(theta);
    return value_of(
        log_post_core<double>(std::span<const double>(theta.data(), theta.size())));
  }

  std::pair<double, Vector> log_post_grad(const Vector& theta) const {
    check_dim(theta);
    return value_and_gradient(
        [&](auto span_theta) {
          using SpanT = decltype(span_theta);
          using S = std::remove_cv_t<typename SpanT::element_type>;
          return log_post_core<S>(span_theta);
        },
        theta);
  }

 private:
  void check_dim(const Vector& theta) const {
    if (theta.size() != space_.total_dim())
      throw ContractViolation("log_posterior: parameter dimension mismatch");
  }

  const UdeProblem& problem_;
  const ParamSpace& space_;
  ProblemLayout lay_;
  const Dataset& data_;
  SolverConfig solver_;
  std::vector<int> all_idx_;
};

inline double log_posterior(const UdeProblem& problem, const ParamSpace& space,
                            const Dataset& data, const Vector& theta_raw,
                            SolverConfig solver = SolverConfig::rk4()) {
  return PosteriorDensity(problem, space, data, solver).log_post(theta_raw);
}

// Type-erased target for samplers and VI; analytic test targets and UDE
// posteriors both fit behind it.
struct LogDensity {
  int dim = 0;
  std::function<double(const Vector&)> f;
  std::function<std::pair<double, Vector>(const Vector&)> fg;
};

inline LogDensity make_log_density(const PosteriorDensity& post) {
  LogDensity d;
  d.dim = post.dim();
  d.f = [&post](const Vector& th) { return post.log_post(th); };
  d.fg = [&post](const Vector& th) { return post.log_post_grad(th); };
  return d;
}

}  // namespace udeq
