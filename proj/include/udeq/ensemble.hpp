#pragma once

#include <cstdint>
#include <vector>

#include "udeq/optimize.hpp"

namespace udeq {

// Multistart ensemble after likelihood-ratio subselection against the
// empirical MLE member.
struct Ensemble {
  std::vector<FitResult> fits;
  int mle_index = -1;
  double threshold = 0.0;
  std::vector<bool> accepted;
  double alpha = 0.05;
  int df = 1;

  int n_accepted() const {
    int n = 0;
    for (bool a : accepted) n += a ? 1 : 0;
    return n;
  }
  std::vector<int> accepted_indices() const {
    std::vector<int> idx;
    for (std::size_t i = 0; i < accepted.size(); ++i)
      if (accepted[i]) idx.push_back(static_cast<int>(i));
    return idx;
  }
};

// (1-alpha) quantile of chi^2 with df degrees of freedom, by numerical
// inversion of the regularized incomplete gamma.
double chi2_quantile(double alpha, int df);

// Member i draws its mechanistic/noise start from the priors and its network
// start from mlp_init, both with seed base_seed + i.
std::vector<Vector> sample_start_points(const UdeProblem& problem, const ParamSpace& space,
                                        int m, std::uint64_t base_seed,
                                        MlpInitScheme scheme = MlpInitScheme::Zeros);

// m independent training schedules; member i folds base cfg.seed + i into its
// start sampling and train/validation split. Result order matches start
// order regardless of scheduling.
std::vector<FitResult> run_multistart(const UdeProblem& problem, const ParamSpace& space,
                                      const Dataset& data, int m, const FitConfig& cfg,
                                      int parallelism,
                                      MlpInitScheme scheme = MlpInitScheme::Zeros);

// Likelihood-ratio test lambda_i = 2*(negll_full_i - negll_full_mle) against
// the chi^2 threshold.
Ensemble select_members(std::vector<FitResult> fits, double alpha, int df);

// Sorted, minimum-shifted negLL values: (rank starting at 1, delta).
std::vector<std::pair<int, double>> waterfall(const std::vector<FitResult>& fits);

}  // namespace udeq
