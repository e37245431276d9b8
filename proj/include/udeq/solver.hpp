#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "udeq/common.hpp"
#include "udeq/param_space.hpp"
#include "udeq/problems.hpp"

namespace udeq {

struct SolverConfig {
  enum class Method { Rk4Fixed, Dopri45Adaptive };
  Method method = Method::Dopri45Adaptive;
  // <= 0 means "resolve to span/1000 at call time" (the training default).
  double fixed_step = 0.0;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  long max_steps = 2'000'000;

  static SolverConfig rk4(double step = 0.0) {
    SolverConfig c;
    c.method = Method::Rk4Fixed;
    c.fixed_step = step;
    return c;
  }
  static SolverConfig dopri(double atol = 1e-8, double rtol = 1e-8) {
    SolverConfig c;
    c.method = Method::Dopri45Adaptive;
    c.abs_tol = atol;
    c.rel_tol = rtol;
    return c;
  }
  void validate() const {
    if (abs_tol <= 0.0 || rel_tol <= 0.0) throw ConfigError("solver tolerances must be > 0");
    if (max_steps <= 0) throw ConfigError("solver max_steps must be > 0");
  }
};

struct Trajectory {
  std::vector<double> times;
  Matrix states;  // n_t_out x n_x, filled when success
  bool success = false;
  std::string failure_reason;
};

template <class S>
struct IntegrationOutput {
  bool success = false;
  std::string reason;
  std::vector<S> states;  // row-major n_t_out x n_x
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kDpC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kDpA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double kDpB5[7] = {35.0 / 384,    0.0,      500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double kDpB4[7] = {5179.0 / 57600,   0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

template <class S>
inline bool all_finite(std::span<const S> v) {
  for (const auto& x : v)
    if (!std::isfinite(value_of(x))) return false;
  return true;
}

}  // namespace detail

// Integrates rhs(t, x, dx) from t0 over the sorted output grid. Steps are
// clipped at output times (and at declared breakpoints), so recorded states
// are step-endpoint values, never interpolants. Failures are reported in the
// result instead of thrown; precondition breaks still throw.
template <class S, class Rhs>
IntegrationOutput<S> integrate_core(Rhs&& rhs, std::span<const S> x0, double t0,
                                    std::span<const double> out_times, const SolverConfig& cfg,
                                    std::span<const double> breakpoints = {}) {
  cfg.validate();
  const int n_x = static_cast<int>(x0.size());
  const int n_out = static_cast<int>(out_times.size());
  IntegrationOutput<S> out;
  for (int i = 0; i + 1 < n_out; ++i)
    if (!(out_times[i] < out_times[i + 1]))
      throw ContractViolation("integrate: out_times must be strictly increasing");
  if (n_out > 0 && out_times[0] < t0)
    throw ContractViolation("integrate: out_times[0] must be >= t0");

  out.states.resize(static_cast<std::size_t>(n_out) * n_x);
  if (n_out == 0) {
    out.success = true;
    return out;
  }
  const double t_end = out_times[n_out - 1];
  const double span = std::max(t_end - t0, 1e-300);

  // Merged, sorted stop set: output times plus breakpoints inside the span.
  std::vector<double> stops(out_times.begin(), out_times.end());
  for (double b : breakpoints)
    if (b > t0 && b < t_end) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::vector<S> x(x0.begin(), x0.end());
  std::vector<S> xt(n_x);
  std::vector<std::vector<S>> k;
  const bool adaptive = cfg.method == SolverConfig::Method::Dopri45Adaptive;
  k.resize(adaptive ? 7 : 4, std::vector<S>(n_x));

  double t = t0;
  int out_idx = 0;
  std::size_t stop_idx = 0;
  auto record_if_output = [&](double tt) {
    while (out_idx < n_out && std::abs(out_times[out_idx] - tt) <= 1e-12 * span) {
      for (int i = 0; i < n_x; ++i) out.states[static_cast<std::size_t>(out_idx) * n_x + i] = x[i];
      ++out_idx;
    }
  };
  record_if_output(t);
  while (stop_idx < stops.size() && stops[stop_idx] <= t + 1e-12 * span) ++stop_idx;

  const double base_h = cfg.fixed_step > 0.0 ? cfg.fixed_step : span / 1000.0;
  double h = adaptive ? std::min(0.01 * span, stops.empty() ? span : stops[0] - t0) : base_h;
  double err_old = 1e-4;
  bool have_fsal = false;
  long n_steps = 0;

  while (out_idx < n_out) {
    if (++n_steps > cfg.max_steps) {
      out.reason = "max_steps exceeded";
      return out;
    }
    const double t_stop = stops[stop_idx];
    double h_try = std::min(h, t_stop - t);
    const bool hits_stop = (t + h_try >= t_stop - 1e-12 * span);
    if (hits_stop) h_try = t_stop - t;

    if (!adaptive) {
      // classical RK4
      rhs(t, std::span<const S>(x), std::span<S>(k[0]));
      for (int i = 0; i < n_x; ++i) xt[i] = x[i] + (0.5 * h_try) * k[0][i];
      rhs(t + 0.5 * h_try, std::span<const S>(xt), std::span<S>(k[1]));
      for (int i = 0; i < n_x; ++i) xt[i] = x[i] + (0.5 * h_try) * k[1][i];
      rhs(t + 0.5 * h_try, std::span<const S>(xt), std::span<S>(k[2]));
      for (int i = 0; i < n_x; ++i) xt[i] = x[i] + h_try * k[2][i];
      rhs(t + h_try, std::span<const S>(xt), std::span<S>(k[3]));
      for (int i = 0; i < n_x; ++i)
        x[i] += (h_try / 6.0) * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
      if (!detail::all_finite(std::span<const S>(x))) {
        out.reason = "non-finite state at t=" + std::to_string(t + h_try);
        return out;
      }
      t = hits_stop ? t_stop : t + h_try;
    } else {
      // Dormand-Prince 5(4) with PI step control; error measured on values.
      if (!have_fsal) {
        rhs(t, std::span<const S>(x), std::span<S>(k[0]));
        have_fsal = true;
      }
      for (int s = 1; s < 7; ++s) {
        for (int i = 0; i < n_x; ++i) {
          S acc = x[i];
          for (int j = 0; j < s; ++j) acc += (h_try * detail::kDpA[s][j]) * k[j][i];
          xt[i] = acc;
        }
        rhs(t + detail::kDpC[s] * h_try, std::span<const S>(xt), std::span<S>(k[s]));
      }
      // xt holds the stage-7 state, which is the 5th-order solution (FSAL).
      double err = 0.0;
      bool finite = true;
      for (int i = 0; i < n_x; ++i) {
        double e = 0.0;
        for (int s = 0; s < 7; ++s)
          e += (detail::kDpB5[s] - detail::kDpB4[s]) * value_of(k[s][i]);
        e *= h_try;
        const double xv = std::abs(value_of(x[i]));
        const double xnv = std::abs(value_of(xt[i]));
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(xv, xnv);
        err += (e / sc) * (e / sc);
        finite = finite && std::isfinite(value_of(xt[i])) && std::isfinite(e);
      }
      err = std::sqrt(err / n_x);
      if (!finite || !(err <= 1.0)) {
        // reject
        if (!finite) err = 1e10;
        const double shrink = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        h = h_try * shrink;
        if (h < 1e-13 * span) {
          out.reason = "step size underflow at t=" + std::to_string(t);
          return out;
        }
        continue;  // k[0] at (t, x) is still valid
      }
      x.swap(xt);
      k[0].swap(k[6]);  // FSAL: stage 7 derivative is next step's k1
      t = hits_stop ? t_stop : t + h_try;
      const double growth =
          std::clamp(0.9 * std::pow(err, -0.17) * std::pow(err_old, 0.04), 0.2, 5.0);
      err_old = std::max(err, 1e-4);
      h = std::max(h_try * growth, 1e-13 * span);
      if (hits_stop) have_fsal = false;  // breakpoint may change the field
    }

    if (hits_stop) {
      record_if_output(t_stop);
      ++stop_idx;
    }
  }
  out.success = true;
  return out;
}

using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;

// Double-precision convenience wrapper producing the public Trajectory type.
Trajectory integrate(const RhsFn& rhs, const Vector& x0, double t0,
                     const std::vector<double>& out_times, const SolverConfig& cfg,
                     const std::vector<double>& breakpoints = {});

// Simulates the composed UDE at raw parameters theta over the output grid.
Trajectory simulate(const UdeProblem& problem, const ParamSpace& space, const Vector& theta_raw,
                    const std::vector<double>& out_times, const SolverConfig& cfg);

// Simulates the data-generating reference system (true parameters, true beta).
Trajectory simulate_reference(const UdeProblem& problem, const std::vector<double>& out_times,
                              const SolverConfig& cfg, const Vector* x0_override = nullptr);

}  // namespace udeq
