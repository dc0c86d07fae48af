#pragma once

#include "charflow/common.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace charflow {

/// Declares the derivative layout a jet carries: k first-order directions and
/// an explicit subset of second-order direction pairs. Only pairs that are
/// actually consumed downstream are declared; full Hessians are never built.
struct JetSpec {
  int dirs = 0;
  std::vector<std::pair<int, int>> pairs;

  JetSpec() = default;
  explicit JetSpec(int k) : dirs(k) {}
  JetSpec(int k, std::vector<std::pair<int, int>> second) : dirs(k), pairs(std::move(second)) {
    for (const auto& [i, j] : pairs) {
      if (i < 0 || i >= dirs || j < 0 || j >= dirs) {
        throw ShapeError("JetSpec: pair index out of direction range");
      }
    }
  }

  int channels() const { return 1 + dirs + static_cast<int>(pairs.size()); }
  int value_col() const { return 0; }
  int d1_col(int i) const { return 1 + i; }
  int d2_col(int p) const { return 1 + dirs + p; }

  bool operator==(const JetSpec& o) const { return dirs == o.dirs && pairs == o.pairs; }
};

using JetSpecPtr = std::shared_ptr<const JetSpec>;

/// Scalar carrying its value plus first- and declared second-order directional
/// derivatives. Arithmetic applies the chain rule exactly; no finite
/// differences anywhere.
class Jet2 {
 public:
  Jet2() = default;
  Jet2(double value, JetSpecPtr spec)
      : v_(value),
        spec_(std::move(spec)),
        d1_(Vec::Zero(spec_->dirs)),
        d2_(Vec::Zero(static_cast<Eigen::Index>(spec_->pairs.size()))) {}

  static Jet2 constant(double value, const JetSpecPtr& spec) { return Jet2(value, spec); }

  /// Seeds an input variable: d1[dir] = scale, everything else zero.
  static Jet2 variable(double value, int dir, const JetSpecPtr& spec, double scale = 1.0) {
    Jet2 j(value, spec);
    j.d1_(dir) = scale;
    return j;
  }

  double value() const { return v_; }
  double d1(int i) const { return d1_(i); }
  double d2(int p) const { return d2_(p); }
  Vec& d1() { return d1_; }
  Vec& d2() { return d2_; }
  const Vec& d1() const { return d1_; }
  const Vec& d2() const { return d2_; }
  const JetSpecPtr& spec() const { return spec_; }

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator+=(double c);
  Jet2& operator-=(double c);
  Jet2& operator*=(double c);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator+(Jet2 a, double c) { return a += c; }
  friend Jet2 operator+(double c, Jet2 a) { return a += c; }
  friend Jet2 operator-(Jet2 a, double c) { return a -= c; }
  friend Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }
  friend Jet2 operator*(Jet2 a, double c) { return a *= c; }
  friend Jet2 operator*(double c, Jet2 a) { return a *= c; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(Jet2 a, double c) { return a *= (1.0 / c); }

 private:
  void check_compatible(const Jet2& o) const;

  double v_ = 0.0;
  JetSpecPtr spec_;
  Vec d1_;
  Vec d2_;
};

/// Composes an analytic scalar map g through a jet: given g(x), g'(x), g''(x)
/// at x = a.value, returns the jet of g(a).
Jet2 apply_unary(const Jet2& a, double g, double dg, double d2g);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 softplus(const Jet2& a);
Jet2 sigmoid(const Jet2& a);

}  // namespace charflow
