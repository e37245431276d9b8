#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "udeq/objective.hpp"
#include "udeq/param_space.hpp"

namespace udeq {

struct AcceptanceStats {
  double mean_accept = 0.0;
  double step_size = 0.0;
  long n_leapfrog = 0;
};

struct ChainResult {
  Matrix samples;  // n_samples x dim, raw scale
  Vector log_posts;
  int chain_id = 0;
  double temperature = 1.0;
  AcceptanceStats acceptance;
  int divergence_count = 0;
  // Filled by parallel tempering only: acceptance rate per adjacent rung pair.
  std::vector<double> swap_accept_rates;

  int n_samples() const { return static_cast<int>(samples.rows()); }
};

struct NutsOptions {
  int max_tree_depth = 10;
  double target_accept = 0.8;
  double divergence_threshold = 1000.0;  // energy error
  bool adapt_mass = true;
};

// Multinomial no-U-turn sampler with dual-averaging step-size adaptation and
// windowed diagonal mass-matrix adaptation during warmup.
ChainResult nuts_sample(const LogDensity& target, const Vector& theta0, int n_samples,
                        int n_warmup, std::uint64_t seed, const NutsOptions& opts = {});

namespace mcmc_detail {

// One NUTS kernel: tree transitions against a fixed target plus the warmup
// adaptation state. Shared by the plain sampler and the tempering ladder.
class NutsKernel {
 public:
  NutsKernel(const LogDensity& target, const NutsOptions& opts);

  void init(const Vector& theta0);
  void begin_warmup(int n_warmup);
  // One transition; adapts while in warmup. Returns the new state's logpost.
  double transition(std::mt19937_64& rng);

  const Vector& theta() const { return theta_; }
  double logpost() const { return logp_; }
  void set_state(const Vector& theta, double logp) {
    theta_ = theta;
    logp_ = logp;
    grad_valid_ = false;
  }
  double step_size() const { return eps_; }
  int divergences() const { return n_divergent_; }
  double mean_accept() const {
    return n_accept_stat_ > 0 ? accept_stat_sum_ / n_accept_stat_ : 0.0;
  }
  long total_leapfrog() const { return n_leapfrog_total_; }

 private:
  struct Tree;
  struct State;
  void leapfrog(State& s, double direction) const;
  double hamiltonian(const State& s) const;
  Tree build_tree(int depth, double direction, const State& from, double h0,
                  std::mt19937_64& rng) const;
  void find_initial_step(std::mt19937_64& rng);
  void adapt(double accept_prob);

  const LogDensity& target_;
  NutsOptions opts_;
  int dim_ = 0;

  Vector theta_;
  double logp_ = 0.0;
  Vector grad_;
  bool grad_valid_ = false;

  Vector inv_mass_;

  double eps_ = 1.0;
  // dual averaging state
  double mu_ = 0.0;
  double log_eps_bar_ = 0.0;
  double h_bar_ = 0.0;
  int da_count_ = 0;

  // warmup window bookkeeping
  int warmup_total_ = 0;
  int warmup_iter_ = 0;
  bool warming_up_ = false;
  int window_start_ = 0;
  int window_end_ = 0;
  Vector welford_mean_;
  Vector welford_m2_;
  long welford_n_ = 0;

  int n_divergent_ = 0;
  double accept_stat_sum_ = 0.0;
  long n_accept_stat_ = 0;
  long n_leapfrog_total_ = 0;

  mutable std::vector<Vector> scratch_;
};

}  // namespace mcmc_detail

}  // namespace udeq
