#include "udeq/prior.hpp"

#include "udeq/transform.hpp"

namespace udeq {

double log_prior(const ParamSpace& space, const Vector& theta_raw) {
  if (theta_raw.size() != space.total_dim())
    throw ContractViolation("log_prior: dimension mismatch");
  return log_prior_core<double>(space,
                                std::span<const double>(theta_raw.data(), theta_raw.size()));
}

double sample_prior_raw(const Segment& seg, std::mt19937_64& rng) {
  switch (seg.prior.kind) {
    case PriorSpec::Kind::Normal: {
      std::normal_distribution<double> dist(seg.prior.p1, seg.prior.p2);
      return dist(rng);
    }
    case PriorSpec::Kind::IsotropicNormal: {
      std::normal_distribution<double> dist(0.0, seg.prior.p2);
      return dist(rng);
    }
    case PriorSpec::Kind::Uniform: {
      std::uniform_real_distribution<double> dist(seg.prior.p1, seg.prior.p2);
      return dist(rng);
    }
    case PriorSpec::Kind::LogUniform: {
      std::uniform_real_distribution<double> dist(std::log(seg.prior.p1),
                                                  std::log(seg.prior.p2));
      return dist(rng);
    }
    case PriorSpec::Kind::Beta: {
      std::gamma_distribution<double> ga(seg.prior.p1, 1.0);
      std::gamma_distribution<double> gb(seg.prior.p2, 1.0);
      const double a = ga(rng);
      const double b = gb(rng);
      return transform_to_raw(seg.transform, a / (a + b));
    }
  }
  return 0.0;
}

}  // namespace udeq
