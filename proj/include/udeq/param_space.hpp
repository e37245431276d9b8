#pragma once

#include <Eigen/Core>
#include <random>
#include <string>
#include <vector>

#include "udeq/common.hpp"
#include "udeq/transform.hpp"

namespace udeq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Prior over one parameter segment. `applies_on` declares whether the density
// (and start-point sampling) lives on the raw or the natural scale.
//   normal(mu, sigma)          raw
//   uniform(lo, hi)            raw
//   loguniform(lo, hi)         raw value uniform on (log lo, log hi)
//   beta(a, b)                 natural value in (0,1)
//   isotropic_normal(sigma)    raw, shared across the segment
struct PriorSpec {
  enum class Kind { Normal, Uniform, LogUniform, Beta, IsotropicNormal };
  enum class Scale { Raw, Natural };
  Kind kind = Kind::IsotropicNormal;
  double p1 = 0.0;
  double p2 = 1.0;
  Scale applies_on = Scale::Raw;

  static PriorSpec normal(double mu, double sigma) {
    return {Kind::Normal, mu, sigma, Scale::Raw};
  }
  static PriorSpec uniform(double lo, double hi) {
    return {Kind::Uniform, lo, hi, Scale::Raw};
  }
  static PriorSpec loguniform(double lo, double hi) {
    return {Kind::LogUniform, lo, hi, Scale::Raw};
  }
  static PriorSpec beta(double a, double b) {
    return {Kind::Beta, a, b, Scale::Natural};
  }
  static PriorSpec isotropic_normal(double sigma) {
    return {Kind::IsotropicNormal, 0.0, sigma, Scale::Raw};
  }
};

struct Segment {
  std::string name;
  int length = 0;
  Transform transform;
  PriorSpec prior;
  std::vector<std::string> entry_names;  // optional; defaults to name.<i>
};

// Flat real parameter vector with named segments and per-entry transforms.
class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<Segment> segments) : segments_(std::move(segments)) {
    offsets_.reserve(segments_.size());
    int off = 0;
    for (auto& seg : segments_) {
      offsets_.push_back(off);
      off += seg.length;
      if (seg.entry_names.empty()) {
        seg.entry_names.reserve(seg.length);
        for (int i = 0; i < seg.length; ++i)
          seg.entry_names.push_back(seg.length == 1 ? seg.name
                                                    : seg.name + "." + std::to_string(i));
      }
    }
    total_dim_ = off;
    for (std::size_t i = 0; i < segments_.size(); ++i)
      for (std::size_t j = i + 1; j < segments_.size(); ++j)
        if (segments_[i].name == segments_[j].name)
          throw ContractViolation("ParamSpace: duplicate segment name " + segments_[i].name);
  }

  int total_dim() const { return total_dim_; }
  const std::vector<Segment>& segments() const { return segments_; }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < segments_.size(); ++i)
      if (segments_[i].name == name) return static_cast<int>(i);
    return -1;
  }
  bool has_segment(const std::string& name) const { return index_of(name) >= 0; }
  const Segment& segment(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw ContractViolation("ParamSpace: no segment named " + name);
    return segments_[i];
  }
  int offset(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw ContractViolation("ParamSpace: no segment named " + name);
    return offsets_[i];
  }
  int offset_at(std::size_t i) const { return offsets_[i]; }

  // Fully qualified per-entry names, e.g. mech.alpha, net.0, noise.sigma.
  std::vector<std::string> column_names() const {
    std::vector<std::string> names;
    names.reserve(total_dim_);
    for (const auto& seg : segments_)
      for (const auto& n : seg.entry_names) names.push_back(n);
    return names;
  }

  Vector to_natural(const Vector& raw) const {
    check_dim(raw, "to_natural");
    Vector nat(total_dim_);
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      const auto& seg = segments_[s];
      for (int i = 0; i < seg.length; ++i)
        nat[offsets_[s] + i] = transform_to_natural(seg.transform, raw[offsets_[s] + i]);
    }
    return nat;
  }

  Vector to_raw(const Vector& natural) const {
    check_dim(natural, "to_raw");
    Vector raw(total_dim_);
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      const auto& seg = segments_[s];
      for (int i = 0; i < seg.length; ++i)
        raw[offsets_[s] + i] = transform_to_raw(seg.transform, natural[offsets_[s] + i]);
    }
    return raw;
  }

 private:
  void check_dim(const Vector& v, const char* op) const {
    if (v.size() != total_dim_)
      throw ContractViolation(std::string(op) + ": expected dimension " +
                              std::to_string(total_dim_) + ", got " + std::to_string(v.size()));
  }

  std::vector<Segment> segments_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

}  // namespace udeq
