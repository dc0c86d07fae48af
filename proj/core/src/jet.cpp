#include "charflow/jet.hpp"

#include <cmath>

namespace charflow {

void Jet2::check_compatible(const Jet2& o) const {
  if (!spec_ || !o.spec_) throw ShapeError("Jet2: missing spec");
  if (spec_ != o.spec_ && !(*spec_ == *o.spec_)) {
    throw ShapeError("Jet2: mismatched direction layout");
  }
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  r.v_ = -r.v_;
  r.d1_ = -r.d1_;
  r.d2_ = -r.d2_;
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  check_compatible(o);
  v_ += o.v_;
  d1_ += o.d1_;
  d2_ += o.d2_;
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  check_compatible(o);
  v_ -= o.v_;
  d1_ -= o.d1_;
  d2_ -= o.d2_;
  return *this;
}

Jet2& Jet2::operator+=(double c) {
  v_ += c;
  return *this;
}

Jet2& Jet2::operator-=(double c) {
  v_ -= c;
  return *this;
}

Jet2& Jet2::operator*=(double c) {
  v_ *= c;
  d1_ *= c;
  d2_ *= c;
  return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  a.check_compatible(b);
  Jet2 r(a.v_ * b.v_, a.spec_);
  r.d1_ = a.d1_ * b.v_ + b.d1_ * a.v_;
  const auto& pairs = a.spec_->pairs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    // D_i D_j (ab) = a_ij b + a_i b_j + a_j b_i + a b_ij
    r.d2_(p) = a.d2_(p) * b.v_ + a.d1_(i) * b.d1_(j) + a.d1_(j) * b.d1_(i) + a.v_ * b.d2_(p);
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  // a/b = a * b^{-1}; inverse via unary composition.
  const double bv = b.value();
  return a * apply_unary(b, 1.0 / bv, -1.0 / (bv * bv), 2.0 / (bv * bv * bv));
}

Jet2 apply_unary(const Jet2& a, double g, double dg, double d2g) {
  Jet2 r(g, a.spec());
  r.d1() = dg * a.d1();
  const auto& pairs = a.spec()->pairs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    // D_i D_j g(a) = g'(a) a_ij + g''(a) a_i a_j
    r.d2()(p) = dg * a.d2(static_cast<int>(p)) + d2g * a.d1(i) * a.d1(j);
  }
  return r;
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return apply_unary(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return apply_unary(a, c, -s, -c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return apply_unary(a, e, e, e);
}

Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value());
  return apply_unary(a, s, 0.5 / s, -0.25 / (s * s * s));
}

namespace {

double stable_softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Jet2 softplus(const Jet2& a) {
  const double s = stable_sigmoid(a.value());
  return apply_unary(a, stable_softplus(a.value()), s, s * (1.0 - s));
}

Jet2 sigmoid(const Jet2& a) {
  const double s = stable_sigmoid(a.value());
  return apply_unary(a, s, s * (1.0 - s), s * (1.0 - s) * (1.0 - 2.0 * s));
}

}  // namespace charflow
