#pragma once

#include <cmath>
#include <random>
#include <span>

#include "udeq/common.hpp"
#include "udeq/dual.hpp"
#include "udeq/param_space.hpp"

namespace udeq {

inline constexpr double kHalfLog2PiPrior = 0.9189385332046727;

// Per-segment log prior density, evaluated on the declared scale (raw or
// natural); out-of-support values collapse the whole prior to the sentinel.
// No change-of-variable terms are added: the density is used exactly as
// declared, identically across all UQ engines.
template <class S>
S log_prior_core(const ParamSpace& space, std::span<const S> theta_raw) {
  S total(0.0);
  const auto& segs = space.segments();
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const Segment& seg = segs[s];
    const int off = space.offset_at(s);
    for (int i = 0; i < seg.length; ++i) {
      const S& raw = theta_raw[off + i];
      switch (seg.prior.kind) {
        case PriorSpec::Kind::Normal: {
          const S z = (raw - seg.prior.p1) / seg.prior.p2;
          total += -kHalfLog2PiPrior - std::log(seg.prior.p2) - 0.5 * z * z;
          break;
        }
        case PriorSpec::Kind::IsotropicNormal: {
          const S z = raw / seg.prior.p2;
          total += -kHalfLog2PiPrior - std::log(seg.prior.p2) - 0.5 * z * z;
          break;
        }
        case PriorSpec::Kind::Uniform: {
          if (value_of(raw) < seg.prior.p1 || value_of(raw) > seg.prior.p2)
            return S(kLogPostSentinel);
          total += -std::log(seg.prior.p2 - seg.prior.p1);
          break;
        }
        case PriorSpec::Kind::LogUniform: {
          const double lo = std::log(seg.prior.p1);
          const double hi = std::log(seg.prior.p2);
          if (value_of(raw) < lo || value_of(raw) > hi) return S(kLogPostSentinel);
          total += -std::log(hi - lo);
          break;
        }
        case PriorSpec::Kind::Beta: {
          const S nat = transform_to_natural(seg.transform, raw);
          const double v = value_of(nat);
          if (v <= 0.0 || v >= 1.0) return S(kLogPostSentinel);
          const double a = seg.prior.p1;
          const double b = seg.prior.p2;
          const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
          total += (a - 1.0) * log(nat) + (b - 1.0) * log(1.0 - nat) - lbeta;
          break;
        }
      }
    }
  }
  return total;
}

double log_prior(const ParamSpace& space, const Vector& theta_raw);

// One raw-scale draw from a segment prior (network segments are initialized
// by mlp_init instead; callers dispatch on segment name).
double sample_prior_raw(const Segment& seg, std::mt19937_64& rng);

}  // namespace udeq
