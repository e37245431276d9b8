#include "udeq/solver.hpp"

namespace udeq {

namespace {

Trajectory to_trajectory(const IntegrationOutput<double>& out,
                         const std::vector<double>& out_times, int n_x) {
  Trajectory tr;
  tr.times = out_times;
  tr.success = out.success;
  tr.failure_reason = out.reason;
  if (out.success) {
    tr.states.resize(static_cast<Eigen::Index>(out_times.size()), n_x);
    for (std::size_t i = 0; i < out_times.size(); ++i)
      for (int j = 0; j < n_x; ++j) tr.states(static_cast<Eigen::Index>(i), j) = out.states[i * n_x + j];
  }
  return tr;
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const Vector& x0, double t0,
                     const std::vector<double>& out_times, const SolverConfig& cfg,
                     const std::vector<double>& breakpoints) {
  auto wrapped = [&rhs](double t, std::span<const double> x, std::span<double> dx) {
    rhs(t, x, dx);
  };
  const auto out = integrate_core<double>(wrapped,
                                          std::span<const double>(x0.data(), x0.size()), t0,
                                          std::span<const double>(out_times), cfg,
                                          std::span<const double>(breakpoints));
  return to_trajectory(out, out_times, static_cast<int>(x0.size()));
}

Trajectory simulate(const UdeProblem& problem, const ParamSpace& space, const Vector& theta_raw,
                    const std::vector<double>& out_times, const SolverConfig& cfg) {
  if (theta_raw.size() != space.total_dim())
    throw ContractViolation("simulate: parameter dimension mismatch");
  const ProblemLayout lay = make_layout(problem, space);
  const UdeRhs<double> rhs(problem, lay,
                           std::span<const double>(theta_raw.data(), theta_raw.size()));
  const auto out = integrate_core<double>(
      rhs, std::span<const double>(problem.x0.data(), problem.x0.size()), problem.t0,
      std::span<const double>(out_times), cfg);
  return to_trajectory(out, out_times, problem.n_x);
}

Trajectory simulate_reference(const UdeProblem& problem, const std::vector<double>& out_times,
                              const SolverConfig& cfg, const Vector* x0_override) {
  const GeneratorRhs rhs{problem};
  const Vector& x0 = x0_override ? *x0_override : problem.x0;
  if (x0.size() != problem.n_x)
    throw ContractViolation("simulate_reference: x0 dimension mismatch");
  const auto out = integrate_core<double>(
      rhs, std::span<const double>(x0.data(), x0.size()), problem.t0,
      std::span<const double>(out_times), cfg,
      std::span<const double>(problem.gen_breakpoints));
  return to_trajectory(out, out_times, problem.n_x);
}

}  // namespace udeq
