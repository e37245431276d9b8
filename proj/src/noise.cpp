#include "udeq/noise.hpp"

namespace udeq {

namespace {
void check_shapes(const Matrix& pred, const Matrix& obs) {
  if (pred.rows() != obs.rows() || pred.cols() != obs.cols())
    throw ContractViolation("negll: prediction and observation shapes differ");
}
}  // namespace

double negll_gaussian(const Matrix& pred, const Matrix& obs, double sigma) {
  check_shapes(pred, obs);
  if (sigma <= 0.0) throw std::domain_error("negll_gaussian: sigma > 0 required");
  double total = 0.0;
  for (Eigen::Index j = 0; j < pred.cols(); ++j)
    for (Eigen::Index i = 0; i < pred.rows(); ++i)
      total += negll_gaussian_term<double>(pred(i, j), obs(i, j), sigma);
  return total;
}

double negll_negbin(const Matrix& pred, const Matrix& obs, double d) {
  check_shapes(pred, obs);
  if (d <= 1.0) throw std::domain_error("negll_negbin: dispersion d > 1 required");
  for (Eigen::Index j = 0; j < obs.cols(); ++j)
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
      const double k = obs(i, j);
      if (k < 0.0 || k != std::floor(k))
        throw ContractViolation("negll_negbin: observations must be non-negative integers");
    }
  double total = 0.0;
  for (Eigen::Index j = 0; j < pred.cols(); ++j)
    for (Eigen::Index i = 0; i < pred.rows(); ++i) {
      const double term = negll_negbin_term<double>(pred(i, j), obs(i, j), d);
      if (is_sentinel_negll(term)) return kNegllSentinel;
      total += term;
    }
  return total;
}

double negbin_log_pmf(unsigned k, double mu, double d) {
  return -negll_negbin_term<double>(mu, static_cast<double>(k), d);
}

double negbin_pmf(unsigned k, double mu, double d) { return std::exp(negbin_log_pmf(k, mu, d)); }

unsigned negbin_quantile(double mu, double d, double q) {
  if (q < 0.0 || q > 1.0) throw ContractViolation("negbin_quantile: q in [0,1] required");
  const double sd = std::sqrt(d * mu);
  const unsigned hard_cap = static_cast<unsigned>(std::max(mu + 40.0 * sd + 100.0, 1e3));
  double cdf = 0.0;
  for (unsigned k = 0; k <= hard_cap; ++k) {
    cdf += negbin_pmf(k, mu, d);
    if (cdf >= q) return k;
  }
  return hard_cap;
}

unsigned negbin_sample(std::mt19937_64& rng, double mu, double d) {
  const double r = mu / (d - 1.0);
  std::gamma_distribution<double> gamma(r, d - 1.0);
  const double lambda = gamma(rng);
  std::poisson_distribution<long> pois(std::max(lambda, 1e-300));
  return static_cast<unsigned>(std::max<long>(pois(rng), 0));
}

}  // namespace udeq
