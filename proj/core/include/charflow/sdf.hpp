#pragma once

#include "charflow/common.hpp"

#include <memory>

namespace charflow {

/// What boundary losses and the renderer consume; satisfied by both the
/// analytic primitives below and the learned SDF net.
class SdfInterface {
 public:
  virtual ~SdfInterface() = default;
  virtual double sdf(const Vec3& x) const = 0;
  virtual Vec3 gradient(const Vec3& x) const = 0;

  /// n = grad s / |grad s|; throws NumericError where |grad s| <= 1e-6.
  Vec3 normal(const Vec3& x) const;
};

/// Exact signed distance primitives with translate/union composition.
/// Negative inside. |grad s| = 1 away from medial axes.
class AnalyticSdf : public SdfInterface {
 public:
  static AnalyticSdf sphere(const Vec3& center, double radius);
  static AnalyticSdf box(const Vec3& halfwidths);
  /// Capped cylinder around the given axis (0=x,1=y,2=z) through the origin.
  static AnalyticSdf capped_cylinder(int axis, double radius, double half_height);
  static AnalyticSdf translate(AnalyticSdf inner, const Vec3& offset);
  static AnalyticSdf unite(AnalyticSdf a, AnalyticSdf b);

  double sdf(const Vec3& x) const override;
  Vec3 gradient(const Vec3& x) const override;

  struct Node;

 private:
  explicit AnalyticSdf(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// Smooth cosine ramp 0 -> 1 over s in [0, eps]; zero for s <= 0. Used to
/// fade density in the obstacle band so target images stay alias-free.
double obstacle_mask(double s, double eps);

}  // namespace charflow
