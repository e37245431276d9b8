#pragma once

#include <span>
#include <vector>

#include "udeq/dual.hpp"
#include "udeq/param_space.hpp"

namespace udeq {

// Lane width of one forward-mode pass; 63/64-dimensional problems fit in one.
inline constexpr int kGradLanes = 64;

// Gradient of a scalar functional of the raw parameters. The functional must
// be callable with both double and DualN spans (generic lambda or templated
// operator()), which replays the entire computation -- ODE discretization
// included -- so the result is exact for the discretized map. Wider spaces are
// handled by chunking seed directions.
template <class F>
std::pair<double, Vector> value_and_gradient(F&& loss, const Vector& theta_raw) {
  using D = DualN<kGradLanes>;
  const int n = static_cast<int>(theta_raw.size());
  Vector grad = Vector::Zero(n);
  double value = 0.0;
  std::vector<D> th(n);
  for (int start = 0; start < n; start += kGradLanes) {
    const int lanes = std::min(kGradLanes, n - start);
    for (int i = 0; i < n; ++i) th[i] = D(theta_raw[i]);
    for (int l = 0; l < lanes; ++l) th[start + l].d[l] = 1.0;
    const D out = loss(std::span<const D>(th));
    if (start == 0) value = out.v;
    for (int l = 0; l < lanes; ++l) grad[start + l] = out.d[l];
  }
  if (n == 0) value = value_of(loss(std::span<const double>()));
  return {value, grad};
}

template <class F>
Vector gradient_of(F&& loss, const Vector& theta_raw) {
  return value_and_gradient(loss, theta_raw).second;
}

// Central finite differences on the raw scale; the independent oracle used by
// the gradient test suites.
template <class F>
Vector finite_difference_gradient(F&& loss, const Vector& theta_raw, double h = 1e-5) {
  const int n = static_cast<int>(theta_raw.size());
  Vector g(n);
  Vector t = theta_raw;
  for (int i = 0; i < n; ++i) {
    const double orig = t[i];
    t[i] = orig + h;
    const double fp = loss(std::span<const double>(t.data(), n));
    t[i] = orig - h;
    const double fm = loss(std::span<const double>(t.data(), n));
    t[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace udeq
