#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "udeq/common.hpp"
#include "udeq/mlp.hpp"
#include "udeq/param_space.hpp"
#include "udeq/transform.hpp"

namespace udeq {

enum class Scenario { Quadratic, SeirPulse, SeirWaves };
enum class NoiseKind { Gaussian, NegBin };
enum class NetRole { TimeVaryingInput, AdditiveTerm };

inline std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Quadratic: return "quadratic";
    case Scenario::SeirPulse: return "seir_pulse";
    case Scenario::SeirWaves: return "seir_waves";
  }
  return "quadratic";
}

inline Scenario parse_scenario(const std::string& name) {
  if (name == "quadratic") return Scenario::Quadratic;
  if (name == "seir_pulse") return Scenario::SeirPulse;
  if (name == "seir_waves") return Scenario::SeirWaves;
  throw ConfigError("unknown scenario '" + name + "' (expected quadratic|seir_pulse|seir_waves)");
}

inline std::string noise_kind_name(NoiseKind k) {
  return k == NoiseKind::Gaussian ? "gaussian" : "negbin";
}

inline NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "negbin") return NoiseKind::NegBin;
  throw ConfigError("unknown noise kind '" + name + "' (expected gaussian|negbin)");
}

// Data-generating transmission rates.
inline double beta_pulse(double t) { return (t > 15.0 && t < 30.0) ? 0.5 : 0.05; }

inline double beta_waves(double t) {
  if (t < 0.0) throw ContractViolation("beta_waves: t >= 0 required");
  return std::cos((-1.0 + std::sqrt(1.0 + 4.0 * t)) * 1.5 + 0.25 * M_PI) * 0.3 + 0.4;
}

// SEIR flow form; the component sum cancels by construction.
template <class S>
inline void rhs_seir_core(const S& beta, const S& alpha, const S& gamma,
                          std::span<const S> x, std::span<S> dx) {
  const S n_total = x[0] + x[1] + x[2] + x[3];
  const S flow_se = beta * x[0] * x[2] / n_total;
  const S flow_ei = alpha * x[1];
  const S flow_ir = gamma * x[2];
  dx[0] = -flow_se;
  dx[1] = flow_se - flow_ei;
  dx[2] = flow_ei - flow_ir;
  dx[3] = flow_ir;
}

inline std::vector<double> rhs_seir(double /*t*/, std::span<const double> x, double beta,
                                    double alpha, double gamma) {
  if (x.size() != 4) throw ContractViolation("rhs_seir: state dimension must be 4");
  for (double xi : x)
    if (!std::isfinite(xi)) throw ContractViolation("rhs_seir: non-finite state component");
  if (x[0] + x[1] + x[2] + x[3] <= 0.0)
    throw ContractViolation("rhs_seir: degenerate state, population N <= 0");
  std::vector<double> dx(4);
  rhs_seir_core<double>(beta, alpha, gamma, x, dx);
  return dx;
}

template <class S>
inline S rhs_quadratic_core(const S& alpha, const S& beta, const S& x) {
  return alpha * x - beta * x * x;
}

inline double rhs_quadratic(double x, double alpha, double beta) {
  return rhs_quadratic_core<double>(alpha, beta, x);
}

// One synthetic problem: composed right-hand side shape, observable map,
// initial condition, time horizon and the role the network plays.
struct UdeProblem {
  std::string name;
  Scenario scenario = Scenario::Quadratic;
  NoiseKind noise_kind = NoiseKind::Gaussian;
  int n_x = 1;
  std::vector<int> observable;  // state indices selected by h
  Vector x0;
  double t0 = 0.0;
  double t1 = 10.0;
  NetRole net_role = NetRole::AdditiveTerm;
  MlpSpec mlp;
  // Optional (0,3) box on beta(t) instead of the default exp parameterization.
  bool beta_tanh_box = false;
  // Discontinuities of the data-generating rate (solver steps are clipped here).
  std::vector<double> gen_breakpoints;
  // Ground-truth mechanistic parameters of the generator.
  double true_alpha = 0.0;
  double true_gamma = 0.0;       // SEIR only
  double true_beta_const = 0.0;  // quadratic only

  int n_y() const { return static_cast<int>(observable.size()); }
  std::vector<std::string> state_names() const {
    if (scenario == Scenario::Quadratic) return {"x"};
    return {"S", "E", "I", "R"};
  }
  double generator_beta(double t) const {
    return scenario == Scenario::SeirPulse ? beta_pulse(t) : beta_waves(t);
  }
};

inline UdeProblem make_problem(Scenario sc, NoiseKind noise,
                               const MlpSpec& net_arch = MlpSpec{},
                               bool beta_tanh_box = false) {
  UdeProblem p;
  p.scenario = sc;
  p.noise_kind = noise;
  p.name = scenario_name(sc);
  p.mlp = net_arch;
  p.beta_tanh_box = beta_tanh_box;
  if (sc == Scenario::Quadratic) {
    if (noise == NoiseKind::NegBin)
      throw ConfigError("quadratic scenario is defined for gaussian noise only");
    p.n_x = 1;
    p.observable = {0};
    p.x0 = Vector::Constant(1, 0.1);
    p.t0 = 0.0;
    p.t1 = 10.0;
    p.net_role = NetRole::AdditiveTerm;
    p.mlp.input_scale = 1.0;  // net sees the state directly
    p.true_alpha = 1.0;
    p.true_beta_const = 2.0;
  } else {
    p.n_x = 4;
    p.observable = {2, 3};  // I and R
    p.x0 = Vector(4);
    if (noise == NoiseKind::Gaussian)
      p.x0 << 0.995, 0.004, 0.001, 0.0;
    else
      p.x0 << 995.0, 4.0, 1.0, 0.0;
    p.t0 = 0.0;
    p.t1 = 130.0;
    p.net_role = NetRole::TimeVaryingInput;
    p.mlp.input_scale = p.t1;  // keep tanh units out of saturation
    if (sc == Scenario::SeirPulse) {
      p.true_alpha = 0.33;
      p.true_gamma = 0.05;
      p.gen_breakpoints = {15.0, 30.0};
    } else {
      p.true_alpha = 0.9;
      p.true_gamma = 0.1;
    }
  }
  validate_mlp_spec(p.mlp);
  if (p.mlp.input_dim() != 1 || p.mlp.output_dim() != 1)
    throw ConfigError("network must be scalar-in / scalar-out for the supported problems");
  return p;
}

// Segments: one per mechanistic parameter, then the network, then the noise
// parameter (sigma for gaussian, success probability p with d = 1/p for negbin).
inline ParamSpace make_param_space(const UdeProblem& p) {
  std::vector<Segment> segs;
  if (p.scenario == Scenario::Quadratic) {
    segs.push_back({"alpha", 1, Transform::log(), PriorSpec::loguniform(0.1, 10.0), {"alpha"}});
  } else {
    segs.push_back(
        {"alpha", 1, Transform::tanh_box(12.0, 12.0), PriorSpec::normal(0.0, 1.0), {"alpha"}});
    segs.push_back(
        {"gamma", 1, Transform::tanh_box(0.5, 0.5), PriorSpec::normal(0.0, 1.0), {"gamma"}});
  }
  segs.push_back({"net", p.mlp.param_count(), Transform::identity(),
                  PriorSpec::isotropic_normal(std::sqrt(3.0)), {}});
  if (p.noise_kind == NoiseKind::Gaussian) {
    segs.push_back(
        {"noise", 1, Transform::log(), PriorSpec::uniform(-10.0, 10.0), {"sigma"}});
  } else {
    segs.push_back(
        {"noise", 1, Transform::tanh_box(0.5, 0.5), PriorSpec::beta(2.0, 2.0), {"p"}});
  }
  return ParamSpace(std::move(segs));
}

// Offsets resolved once per simulation so the hot path never does name lookups.
struct ProblemLayout {
  int alpha_off = -1;
  int gamma_off = -1;
  int net_off = -1;
  int net_len = 0;
  int noise_off = -1;
  Transform alpha_tf;
  Transform gamma_tf;
  Transform noise_tf;
};

inline ProblemLayout make_layout(const UdeProblem& p, const ParamSpace& space) {
  ProblemLayout lay;
  lay.alpha_off = space.offset("alpha");
  lay.alpha_tf = space.segment("alpha").transform;
  if (p.scenario != Scenario::Quadratic) {
    lay.gamma_off = space.offset("gamma");
    lay.gamma_tf = space.segment("gamma").transform;
  }
  lay.net_off = space.offset("net");
  lay.net_len = space.segment("net").length;
  if (lay.net_len != p.mlp.param_count())
    throw ContractViolation("parameter space and network architecture disagree");
  lay.noise_off = space.offset("noise");
  lay.noise_tf = space.segment("noise").transform;
  return lay;
}

// Composed UDE vector field f(t, x, theta_raw). SEIR: beta(t) comes from the
// network (exp or tanh-box parameterization); quadratic: the network replaces
// the -beta*x^2 term.
template <class S>
struct UdeRhs {
  const UdeProblem& problem;
  const ProblemLayout& lay;
  std::span<const S> theta;
  S alpha;  // transformed once per trajectory
  S gamma;

  UdeRhs(const UdeProblem& p, const ProblemLayout& l, std::span<const S> th)
      : problem(p), lay(l), theta(th) {
    alpha = transform_to_natural(lay.alpha_tf, theta[lay.alpha_off]);
    gamma = lay.gamma_off >= 0 ? transform_to_natural(lay.gamma_tf, theta[lay.gamma_off])
                               : S(0.0);
  }

  void operator()(double t, std::span<const S> x, std::span<S> dx) const {
    const std::span<const S> net = theta.subspan(lay.net_off, lay.net_len);
    if (problem.net_role == NetRole::TimeVaryingInput) {
      const S raw = mlp_forward(problem.mlp, net, S(t));
      const S beta = problem.beta_tanh_box ? S(1.5 * tanh(raw) + 1.5) : exp(raw);
      rhs_seir_core(beta, alpha, gamma, x, dx);
    } else {
      dx[0] = alpha * x[0] - mlp_forward(problem.mlp, net, x[0]);
    }
  }
};

// Reference vector field used for data generation (true beta(t), true params).
struct GeneratorRhs {
  const UdeProblem& problem;

  void operator()(double t, std::span<const double> x, std::span<double> dx) const {
    if (problem.scenario == Scenario::Quadratic) {
      dx[0] = rhs_quadratic_core<double>(problem.true_alpha, problem.true_beta_const, x[0]);
    } else {
      rhs_seir_core<double>(problem.generator_beta(t), problem.true_alpha, problem.true_gamma,
                            x, dx);
    }
  }
};

inline std::vector<double> apply_observable(const UdeProblem& p, std::span<const double> x) {
  std::vector<double> y(p.observable.size());
  for (std::size_t i = 0; i < p.observable.size(); ++i) y[i] = x[p.observable[i]];
  return y;
}

}  // namespace udeq
