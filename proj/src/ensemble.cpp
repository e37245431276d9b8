#include "udeq/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "udeq/math_special.hpp"
#include "udeq/thread_pool.hpp"

namespace udeq {

double chi2_quantile(double alpha, int df) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("chi2_quantile: alpha in (0,1) required");
  if (df < 1) throw ConfigError("chi2_quantile: df >= 1 required");
  const double target = 1.0 - alpha;
  const double a = 0.5 * df;
  // bracket, then bisect; gamma_p is monotone in x
  double hi = df + 20.0 * std::sqrt(2.0 * df) + 50.0;
  while (gamma_p(a, 0.5 * hi) < target) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_p(a, 0.5 * mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-10 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<Vector> sample_start_points(const UdeProblem& problem, const ParamSpace& space,
                                        int m, std::uint64_t base_seed, MlpInitScheme scheme) {
  if (m < 1) throw ConfigError("sample_start_points: m >= 1 required");
  std::vector<Vector> starts(m);
  for (int i = 0; i < m; ++i)
    starts[i] = sample_start_point(problem, space, seed_for_member(base_seed, i), scheme);
  return starts;
}

std::vector<FitResult> run_multistart(const UdeProblem& problem, const ParamSpace& space,
                                      const Dataset& data, int m, const FitConfig& cfg,
                                      int parallelism, MlpInitScheme scheme) {
  if (m < 1) throw ConfigError("run_multistart: m >= 1 required");
  std::vector<FitResult> fits(m);
  parallel_for(m, parallelism, [&](int i) {
    FitConfig member_cfg = cfg;
    member_cfg.seed = seed_for_member(cfg.seed, i);
    const Vector theta0 = sample_start_point(problem, space, member_cfg.seed, scheme);
    fits[i] = fit_single(problem, space, data, member_cfg, theta0);
  });
  return fits;
}

Ensemble select_members(std::vector<FitResult> fits, double alpha, int df) {
  Ensemble ens;
  ens.alpha = alpha;
  ens.df = df;
  ens.threshold = chi2_quantile(alpha, df);
  ens.fits = std::move(fits);
  ens.accepted.assign(ens.fits.size(), false);

  double best = kNegllSentinel;
  for (std::size_t i = 0; i < ens.fits.size(); ++i) {
    const double v = ens.fits[i].negll_full;
    if (std::isfinite(v) && !is_sentinel_negll(v) && v < best) {
      best = v;
      ens.mle_index = static_cast<int>(i);
    }
  }
  if (ens.mle_index < 0)
    throw NumericalError("select_members: no member produced a finite likelihood");
  for (std::size_t i = 0; i < ens.fits.size(); ++i) {
    const double v = ens.fits[i].negll_full;
    if (!std::isfinite(v) || is_sentinel_negll(v)) continue;
    const double lambda = 2.0 * (v - best);
    ens.accepted[i] = lambda <= ens.threshold;
  }
  return ens;
}

std::vector<std::pair<int, double>> waterfall(const std::vector<FitResult>& fits) {
  std::vector<double> values;
  values.reserve(fits.size());
  for (const auto& f : fits) values.push_back(f.negll_full);
  std::sort(values.begin(), values.end());
  std::vector<std::pair<int, double>> out;
  out.reserve(values.size());
  const double min_v = values.empty() ? 0.0 : values.front();
  for (std::size_t i = 0; i < values.size(); ++i)
    out.emplace_back(static_cast<int>(i) + 1, values[i] - min_v);
  return out;
}

}  // namespace udeq
