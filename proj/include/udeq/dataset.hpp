#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "udeq/noise.hpp"
#include "udeq/param_space.hpp"
#include "udeq/problems.hpp"
#include "udeq/solver.hpp"

namespace udeq {

struct GroundTruth {
  std::vector<std::string> mech_names;
  std::vector<double> mech_values;  // natural scale
  double noise_param = 0.0;
  Matrix reference_observables;  // noise-free observable values at the data times
};

struct Dataset {
  std::vector<double> times;
  Matrix observations;  // n_t x n_y
  std::string scenario;
  std::uint64_t seed = 0;
  NoiseModel noise;
  std::optional<GroundTruth> ground_truth;

  int n_t() const { return static_cast<int>(times.size()); }
  int n_y() const { return static_cast<int>(observations.cols()); }
};

// Observation times exclude t0: n uniform points on (t0, t1].
std::vector<double> observation_times(const UdeProblem& problem);

// Checks the (scenario, noise) pair against the catalog of studied settings.
bool in_scenario_catalog(Scenario sc, const NoiseModel& noise);

// Integrates the reference system at tight tolerance, applies the observable
// map and injects noise. Bit-reproducible for a fixed (scenario, noise, seed).
Dataset generate_dataset(Scenario scenario, const NoiseModel& noise, std::uint64_t seed,
                         bool allow_custom = false);

struct SplitIndices {
  std::vector<int> train;  // ascending
  std::vector<int> val;    // ascending
};

// Uniform random partition without replacement; validation size is
// round(n_t * val_fraction). Both halves keep time order.
SplitIndices split_indices(int n_t, std::uint64_t seed, double val_fraction);

std::pair<Dataset, Dataset> train_val_split(const Dataset& data, std::uint64_t seed,
                                            double val_fraction);

Dataset subset_dataset(const Dataset& data, const std::vector<int>& idx);

}  // namespace udeq
