#pragma once

#include "charflow/domain.hpp"
#include "charflow/sdf.hpp"
#include "charflow/sine_mlp.hpp"
#include "charflow/trajectory_field.hpp"

namespace charflow {

double softplus(double x);
double sigmoid(double x);

struct DensityColor {
  double sigma = 0.0;
  Vec3 color = Vec3::Zero();
};

/// Time-varying radiance field F_N(x,t) = (sigma_N, c): softplus density,
/// sigmoid color, view-independent.
class DynamicField {
 public:
  DynamicField() = default;
  explicit DynamicField(SineMlp net);
  static DynamicField make(int width, int hidden_layers, double omega0, Rng& rng);

  const SineMlp& net() const { return net_; }
  SineMlp& net() { return net_; }

  DensityColor query(const Spacetime& p) const;
  double density(const Spacetime& p) const { return query(p).sigma; }

 private:
  SineMlp net_;
};

/// Lagrangian density head sigma_L = F_L(E(x,t)): a function of the
/// trajectory feature only, so equal features give exactly equal densities.
class LagrangianDensityHead {
 public:
  LagrangianDensityHead() = default;
  explicit LagrangianDensityHead(SineMlp net);
  static LagrangianDensityHead make(int width, double omega0, Rng& rng);

  const SineMlp& net() const { return net_; }
  SineMlp& net() { return net_; }

  double from_feature(const Vec& z) const;
  double query(const TrajectoryField& f, const Spacetime& p) const;

 private:
  SineMlp net_;
};

/// Learned static branch: SDF net x -> (s, g in R^16) and color net
/// (x, g, n) -> rgb. The analytic stand-in satisfies the same SdfInterface,
/// so boundary losses and the renderer consume either.
class StaticSdfField {
 public:
  static constexpr int kGeomFeatureDim = 16;

  StaticSdfField() = default;
  StaticSdfField(SineMlp sdf_net, SineMlp color_net);
  static StaticSdfField make(int width, int hidden_layers, double omega0, Rng& rng);

  const SineMlp& sdf_net() const { return sdf_net_; }
  SineMlp& sdf_net() { return sdf_net_; }
  const SineMlp& color_net() const { return color_net_; }
  SineMlp& color_net() { return color_net_; }

  struct Sample {
    double s = 0.0;
    Vec geom_feature;  // g, length 16
    Vec3 normal = Vec3::UnitZ();
    Vec3 color = Vec3::Zero();
  };

  double sdf(const Vec3& x) const;
  Vec3 sdf_gradient(const Vec3& x) const;  // via spatial jets
  /// Full query; throws NumericError where |grad s| <= 1e-6.
  Sample query(const Vec3& x) const;

 private:
  SineMlp sdf_net_;
  SineMlp color_net_;
};

/// SdfInterface view over the learned field.
class LearnedSdf : public SdfInterface {
 public:
  explicit LearnedSdf(const StaticSdfField* field) : field_(field) {}
  double sdf(const Vec3& x) const override { return field_->sdf(x); }
  Vec3 gradient(const Vec3& x) const override { return field_->sdf_gradient(x); }

 private:
  const StaticSdfField* field_;
};

}  // namespace charflow
