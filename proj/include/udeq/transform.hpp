#pragma once

#include <cmath>
#include <string>

#include "udeq/common.hpp"
#include "udeq/dual.hpp"

namespace udeq {

// Entrywise reparameterization between the unconstrained raw scale seen by
// optimizers/samplers and the natural (model) scale.
//   Identity:  natural = raw
//   Log:       natural = exp(raw) > 0
//   TanhBox:   natural = a * tanh(raw - c) + b, image (b-a, b+a)
struct Transform {
  enum class Kind { Identity, Log, TanhBox };
  Kind kind = Kind::Identity;
  double a = 0.0;  // TanhBox half-width
  double b = 0.0;  // TanhBox midpoint
  double c = 0.0;  // TanhBox center offset

  static Transform identity() { return {}; }
  static Transform log() { return {Kind::Log, 0.0, 0.0, 0.0}; }
  static Transform tanh_box(double a, double b, double c = 0.0) {
    return {Kind::TanhBox, a, b, c};
  }
};

template <class S>
inline S transform_to_natural(const Transform& t, const S& raw) {
  switch (t.kind) {
    case Transform::Kind::Identity:
      return raw;
    case Transform::Kind::Log:
      return exp(raw);
    case Transform::Kind::TanhBox:
      return t.a * tanh(raw - t.c) + t.b;
  }
  return raw;
}

inline double transform_to_raw(const Transform& t, double natural) {
  switch (t.kind) {
    case Transform::Kind::Identity:
      return natural;
    case Transform::Kind::Log:
      if (natural <= 0.0)
        throw ContractViolation("to_raw: Log transform requires natural > 0");
      return std::log(natural);
    case Transform::Kind::TanhBox: {
      const double u = (natural - t.b) / t.a;
      if (u <= -1.0 || u >= 1.0)
        throw ContractViolation("to_raw: value on or outside TanhBox bounds (" +
                                std::to_string(t.b - t.a) + ", " + std::to_string(t.b + t.a) +
                                ")");
      return std::atanh(u) + t.c;
    }
  }
  return natural;
}

inline std::string transform_name(const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::Identity:
      return "identity";
    case Transform::Kind::Log:
      return "log";
    case Transform::Kind::TanhBox:
      return "tanhbox";
  }
  return "identity";
}

}  // namespace udeq
