#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "udeq/common.hpp"
#include "udeq/dual.hpp"
#include "udeq/param_space.hpp"

namespace udeq {

// Fully connected feed-forward network with tanh hidden units and a linear
// output, small enough to live inside an ODE right-hand side.
struct MlpSpec {
  std::vector<int> layer_sizes{1, 6, 6, 1};
  double input_scale = 1.0;  // divisor applied to the raw input

  int param_count() const {
    int n = 0;
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
      n += layer_sizes[i] * layer_sizes[i + 1] + layer_sizes[i + 1];
    return n;
  }
  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
};

inline constexpr int kMaxLayerWidth = 32;

inline void validate_mlp_spec(const MlpSpec& spec) {
  if (spec.layer_sizes.size() < 2)
    throw ConfigError("MlpSpec: need at least input and output layer");
  for (int n : spec.layer_sizes)
    if (n < 1 || n > kMaxLayerWidth)
      throw ConfigError("MlpSpec: layer sizes must be in [1, " +
                        std::to_string(kMaxLayerWidth) + "]");
  if (spec.input_scale <= 0.0) throw ConfigError("MlpSpec: input_scale must be > 0");
}

enum class MlpInitScheme { GlorotUniform, Zeros };

// Weights drawn uniformly in +-sqrt(6/(fan_in+fan_out)), biases zero.
// Layout per layer: weights row-major (out x in), then biases.
inline Vector mlp_init(const MlpSpec& spec, std::uint64_t seed, MlpInitScheme scheme) {
  const int n = spec.param_count();
  Vector theta = Vector::Zero(n);
  if (scheme == MlpInitScheme::Zeros) return theta;
  std::mt19937_64 rng(seed);
  int pos = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> unif(-limit, limit);
    for (int i = 0; i < fan_in * fan_out; ++i) theta[pos++] = unif(rng);
    pos += fan_out;  // biases stay zero
  }
  return theta;
}

namespace detail {
template <class S>
inline void accumulate_term(S& acc, const S& a, const S& b) {
  acc += a * b;
}
template <int W>
inline void accumulate_term(DualN<W>& acc, const DualN<W>& a, const DualN<W>& b) {
  acc.add_mul(a, b);
}
}  // namespace detail

// Scalar-in, scalar-out forward pass; S may be double or a dual type so the
// same code serves simulation and sensitivity propagation.
template <class S>
inline S mlp_forward(const MlpSpec& spec, std::span<const S> params, const S& input) {
  if (static_cast<int>(params.size()) != spec.param_count())
    throw ContractViolation("mlp_forward: parameter vector length " +
                            std::to_string(params.size()) + " does not match spec (" +
                            std::to_string(spec.param_count()) + ")");
  std::array<S, kMaxLayerWidth> buf_a;
  std::array<S, kMaxLayerWidth> buf_b;
  S* cur = buf_a.data();
  S* nxt = buf_b.data();
  cur[0] = input * (1.0 / spec.input_scale);
  std::size_t pos = 0;
  const std::size_t n_layers = spec.layer_sizes.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in_n = spec.layer_sizes[l];
    const int out_n = spec.layer_sizes[l + 1];
    const S* w = params.data() + pos;
    const S* b = params.data() + pos + static_cast<std::size_t>(in_n) * out_n;
    for (int o = 0; o < out_n; ++o) {
      S acc = b[o];
      const S* row = w + static_cast<std::size_t>(o) * in_n;
      for (int i = 0; i < in_n; ++i) detail::accumulate_term(acc, row[i], cur[i]);
      nxt[o] = (l + 1 < n_layers) ? tanh(acc) : acc;
    }
    pos += static_cast<std::size_t>(in_n) * out_n + out_n;
    std::swap(cur, nxt);
  }
  return cur[0];
}

inline double mlp_forward(const MlpSpec& spec, const Vector& params, double input) {
  return mlp_forward<double>(spec, std::span<const double>(params.data(), params.size()),
                             input);
}

}  // namespace udeq
