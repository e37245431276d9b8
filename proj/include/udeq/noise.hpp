#pragma once

#include <cmath>
#include <random>
#include <span>

#include "udeq/common.hpp"
#include "udeq/dual.hpp"
#include "udeq/param_space.hpp"
#include "udeq/problems.hpp"

namespace udeq {

// Aleatoric noise description. param is sigma (> 0) for gaussian and the
// dispersion d (> 1, Var = d * mu) for negbin.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Gaussian;
  double param = 0.01;

  NoiseModel() = default;
  NoiseModel(NoiseKind k, double p) : kind(k), param(p) { validate(); }
  void validate() const {
    if (kind == NoiseKind::Gaussian && param <= 0.0)
      throw ConfigError("gaussian noise requires sigma > 0");
    if (kind == NoiseKind::NegBin && param <= 1.0)
      throw ConfigError("negbin noise requires dispersion d > 1");
  }
  static NoiseModel gaussian(double sigma) { return NoiseModel(NoiseKind::Gaussian, sigma); }
  static NoiseModel negbin(double d) { return NoiseModel(NoiseKind::NegBin, d); }
};

inline constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5*log(2*pi)

template <class S>
inline S negll_gaussian_term(const S& pred, double obs, const S& sigma) {
  const S z = (obs - pred) / sigma;
  return kHalfLog2Pi + log(sigma) + 0.5 * z * z;
}

// Mean-dispersion convention: Var = d * mu, size r = mu/(d-1), p = 1/d.
// Returns the sentinel when the predicted mean is non-positive.
template <class S>
inline S negll_negbin_term(const S& mu, double k, const S& d) {
  if (value_of(mu) <= 0.0) return S(kNegllSentinel);
  const S r = mu / (d - 1.0);
  const S log_p = -log(d);
  const S log_1mp = log(d - 1.0) - log(d);
  const S ll = lgamma(k + r) - lgamma(r) - std::lgamma(k + 1.0) + r * log_p + k * log_1mp;
  return -ll;
}

// Double-facing module API (throws on contract breaks).
double negll_gaussian(const Matrix& pred, const Matrix& obs, double sigma);
double negll_negbin(const Matrix& pred, const Matrix& obs, double d);

double negbin_log_pmf(unsigned k, double mu, double d);
double negbin_pmf(unsigned k, double mu, double d);
// Smallest k with CDF(k) >= q.
unsigned negbin_quantile(double mu, double d, double q);
// Gamma-Poisson mixture draw.
unsigned negbin_sample(std::mt19937_64& rng, double mu, double d);

}  // namespace udeq
