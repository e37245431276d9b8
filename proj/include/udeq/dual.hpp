#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "udeq/math_special.hpp"

namespace udeq {

// Forward-mode dual number with a fixed-width derivative lane block.
// Gradients of parameter-dependent functionals are computed by seeding up to
// W unit directions at once and replaying the full computation (including the
// ODE discretization), which makes the result exact for the discretized map.
template <int W>
struct DualN {
  double v;
  std::array<double, W> d;

  // Default-constructed duals are uninitialized scratch (buffer use only);
  // constructing from a double yields a constant with zero derivative.
  DualN() = default;
  DualN(double value) : v(value) { d.fill(0.0); }  // NOLINT: implicit by intent

  static DualN seeded(double value, int lane) {
    DualN x(value);
    x.d[lane] = 1.0;
    return x;
  }

  double value() const { return v; }

  DualN& operator+=(const DualN& o) {
    v += o.v;
    for (int i = 0; i < W; ++i) d[i] += o.d[i];
    return *this;
  }
  DualN& operator-=(const DualN& o) {
    v -= o.v;
    for (int i = 0; i < W; ++i) d[i] -= o.d[i];
    return *this;
  }
  DualN& operator*=(const DualN& o) {
    for (int i = 0; i < W; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  // *this += a * b without materializing the product dual.
  void add_mul(const DualN& a, const DualN& b) {
    for (int i = 0; i < W; ++i) d[i] += a.d[i] * b.v + a.v * b.d[i];
    v += a.v * b.v;
  }

  DualN& operator+=(double c) {
    v += c;
    return *this;
  }
  DualN& operator-=(double c) {
    v -= c;
    return *this;
  }
  DualN& operator*=(double c) {
    v *= c;
    for (int i = 0; i < W; ++i) d[i] *= c;
    return *this;
  }
};

template <int W>
inline DualN<W> operator+(DualN<W> a, const DualN<W>& b) { return a += b; }
template <int W>
inline DualN<W> operator+(DualN<W> a, double b) { return a += b; }
template <int W>
inline DualN<W> operator+(double a, DualN<W> b) { return b += a; }

template <int W>
inline DualN<W> operator-(DualN<W> a, const DualN<W>& b) { return a -= b; }
template <int W>
inline DualN<W> operator-(DualN<W> a, double b) { return a -= b; }
template <int W>
inline DualN<W> operator-(double a, const DualN<W>& b) {
  DualN<W> r;
  r.v = a - b.v;
  for (int i = 0; i < W; ++i) r.d[i] = -b.d[i];
  return r;
}
template <int W>
inline DualN<W> operator-(const DualN<W>& a) {
  DualN<W> r;
  r.v = -a.v;
  for (int i = 0; i < W; ++i) r.d[i] = -a.d[i];
  return r;
}

template <int W>
inline DualN<W> operator*(DualN<W> a, const DualN<W>& b) { return a *= b; }
template <int W>
inline DualN<W> operator*(DualN<W> a, double b) { return a *= b; }
template <int W>
inline DualN<W> operator*(double a, DualN<W> b) { return b *= a; }

template <int W>
inline DualN<W> operator/(const DualN<W>& a, const DualN<W>& b) {
  DualN<W> r;
  const double inv = 1.0 / b.v;
  r.v = a.v * inv;
  for (int i = 0; i < W; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
  return r;
}
template <int W>
inline DualN<W> operator/(DualN<W> a, double b) { return a *= (1.0 / b); }
template <int W>
inline DualN<W> operator/(double a, const DualN<W>& b) {
  DualN<W> r;
  const double inv = 1.0 / b.v;
  r.v = a * inv;
  const double s = -r.v * inv;
  for (int i = 0; i < W; ++i) r.d[i] = s * b.d[i];
  return r;
}

template <int W>
inline bool operator<(const DualN<W>& a, const DualN<W>& b) { return a.v < b.v; }
template <int W>
inline bool operator<(const DualN<W>& a, double b) { return a.v < b; }
template <int W>
inline bool operator<(double a, const DualN<W>& b) { return a < b.v; }
template <int W>
inline bool operator>(const DualN<W>& a, const DualN<W>& b) { return a.v > b.v; }
template <int W>
inline bool operator>(const DualN<W>& a, double b) { return a.v > b; }
template <int W>
inline bool operator<=(const DualN<W>& a, double b) { return a.v <= b; }
template <int W>
inline bool operator>=(const DualN<W>& a, double b) { return a.v >= b; }

// Chain-rule helper: r = f(a.v), df = f'(a.v).
template <int W>
inline DualN<W> unary_op(const DualN<W>& a, double f, double df) {
  DualN<W> r;
  r.v = f;
  for (int i = 0; i < W; ++i) r.d[i] = df * a.d[i];
  return r;
}

template <int W>
inline DualN<W> exp(const DualN<W>& a) {
  const double e = std::exp(a.v);
  return unary_op(a, e, e);
}
template <int W>
inline DualN<W> log(const DualN<W>& a) {
  return unary_op(a, std::log(a.v), 1.0 / a.v);
}
template <int W>
inline DualN<W> sqrt(const DualN<W>& a) {
  const double s = std::sqrt(a.v);
  return unary_op(a, s, 0.5 / s);
}
template <int W>
inline DualN<W> tanh(const DualN<W>& a) {
  const double t = std::tanh(a.v);
  return unary_op(a, t, 1.0 - t * t);
}
template <int W>
inline DualN<W> cos(const DualN<W>& a) {
  return unary_op(a, std::cos(a.v), -std::sin(a.v));
}
template <int W>
inline DualN<W> sin(const DualN<W>& a) {
  return unary_op(a, std::sin(a.v), std::cos(a.v));
}
template <int W>
inline DualN<W> atanh(const DualN<W>& a) {
  return unary_op(a, std::atanh(a.v), 1.0 / (1.0 - a.v * a.v));
}
template <int W>
inline DualN<W> lgamma(const DualN<W>& a) {
  return unary_op(a, std::lgamma(a.v), digamma(a.v));
}
template <int W>
inline DualN<W> fabs(const DualN<W>& a) {
  return a.v < 0.0 ? -a : a;
}

template <int W>
inline bool isfinite(const DualN<W>& a) { return std::isfinite(a.v); }

// Generic accessors so numeric code can be written once for double and duals.
inline double value_of(double x) { return x; }
template <int W>
inline double value_of(const DualN<W>& x) { return x.v; }

using std::atanh;
using std::cos;
using std::exp;
using std::fabs;
using std::isfinite;
using std::lgamma;
using std::log;
using std::sin;
using std::sqrt;
using std::tanh;

}  // namespace udeq
