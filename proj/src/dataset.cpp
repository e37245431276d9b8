#include "udeq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace udeq {

std::vector<double> observation_times(const UdeProblem& problem) {
  const int n_t = problem.scenario == Scenario::Quadratic ? 12 : 30;
  std::vector<double> times(n_t);
  for (int i = 0; i < n_t; ++i)
    times[i] = problem.t0 + (problem.t1 - problem.t0) * (i + 1) / n_t;
  return times;
}

bool in_scenario_catalog(Scenario sc, const NoiseModel& noise) {
  auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  switch (sc) {
    case Scenario::Quadratic:
      return noise.kind == NoiseKind::Gaussian &&
             (close(noise.param, 0.01) || close(noise.param, 0.05));
    case Scenario::SeirWaves:
      if (noise.kind == NoiseKind::Gaussian)
        return close(noise.param, 0.01) || close(noise.param, 0.05);
      return close(noise.param, 1.2) || close(noise.param, 2.2);
    case Scenario::SeirPulse:
      if (noise.kind == NoiseKind::Gaussian)
        return close(noise.param, 0.01) || close(noise.param, 0.03);
      return close(noise.param, 1.2) || close(noise.param, 2.2);
  }
  return false;
}

Dataset generate_dataset(Scenario scenario, const NoiseModel& noise, std::uint64_t seed,
                         bool allow_custom) {
  noise.validate();
  if (!allow_custom && !in_scenario_catalog(scenario, noise))
    throw ConfigError("scenario/noise combination (" + scenario_name(scenario) + ", " +
                      noise_kind_name(noise.kind) + "=" + std::to_string(noise.param) +
                      ") is outside the studied catalog; set custom=true to force it");
  const UdeProblem problem = make_problem(scenario, noise.kind);

  Dataset data;
  data.times = observation_times(problem);
  data.scenario = problem.name;
  data.seed = seed;
  data.noise = noise;

  const Trajectory ref = simulate_reference(problem, data.times, SolverConfig::dopri(1e-8, 1e-8));
  if (!ref.success)
    throw NumericalError("generate_dataset: reference integration failed: " + ref.failure_reason);

  const int n_t = data.n_t();
  const int n_y = problem.n_y();
  Matrix truth(n_t, n_y);
  for (int i = 0; i < n_t; ++i)
    for (int j = 0; j < n_y; ++j) truth(i, j) = ref.states(i, problem.observable[j]);

  data.observations.resize(n_t, n_y);
  std::mt19937_64 rng(seed);
  if (noise.kind == NoiseKind::Gaussian) {
    std::normal_distribution<double> normal(0.0, noise.param);
    for (int i = 0; i < n_t; ++i)
      for (int j = 0; j < n_y; ++j) data.observations(i, j) = truth(i, j) + normal(rng);
  } else {
    for (int i = 0; i < n_t; ++i)
      for (int j = 0; j < n_y; ++j) {
        const double mu = std::max(truth(i, j), 1e-6);  // trajectories touch 0 at t0
        data.observations(i, j) = static_cast<double>(negbin_sample(rng, mu, noise.param));
      }
  }

  GroundTruth gt;
  if (scenario == Scenario::Quadratic) {
    gt.mech_names = {"alpha", "beta"};
    gt.mech_values = {problem.true_alpha, problem.true_beta_const};
  } else {
    gt.mech_names = {"alpha", "gamma"};
    gt.mech_values = {problem.true_alpha, problem.true_gamma};
  }
  gt.noise_param = noise.param;
  gt.reference_observables = truth;
  data.ground_truth = gt;
  return data;
}

SplitIndices split_indices(int n_t, std::uint64_t seed, double val_fraction) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw ConfigError("val_fraction must lie in (0, 1)");
  const int n_val = static_cast<int>(std::lround(n_t * val_fraction));
  std::vector<int> idx(n_t);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  SplitIndices split;
  split.val.assign(idx.begin(), idx.begin() + n_val);
  split.train.assign(idx.begin() + n_val, idx.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

Dataset subset_dataset(const Dataset& data, const std::vector<int>& idx) {
  Dataset sub;
  sub.scenario = data.scenario;
  sub.seed = data.seed;
  sub.noise = data.noise;
  sub.times.reserve(idx.size());
  sub.observations.resize(static_cast<Eigen::Index>(idx.size()), data.observations.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    sub.times.push_back(data.times[idx[k]]);
    sub.observations.row(static_cast<Eigen::Index>(k)) = data.observations.row(idx[k]);
  }
  return sub;
}

std::pair<Dataset, Dataset> train_val_split(const Dataset& data, std::uint64_t seed,
                                            double val_fraction) {
  const SplitIndices split = split_indices(data.n_t(), seed, val_fraction);
  return {subset_dataset(data, split.train), subset_dataset(data, split.val)};
}

}  // namespace udeq
