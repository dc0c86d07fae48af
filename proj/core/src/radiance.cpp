#include "charflow/radiance.hpp"

#include <cmath>

namespace charflow {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DynamicField::DynamicField(SineMlp net) : net_(std::move(net)) {
  if (net_.input_dim() != 4 || net_.output_dim() != 4) {
    throw ShapeError("DynamicField: net must map (x,y,z,t) -> (raw_sigma, raw_rgb)");
  }
}

DynamicField DynamicField::make(int width, int hidden_layers, double omega0, Rng& rng) {
  std::vector<int> dims;
  dims.push_back(4);
  for (int i = 0; i < hidden_layers; ++i) dims.push_back(width);
  dims.push_back(4);
  return DynamicField(SineMlp::random_init(dims, omega0, rng));
}

DensityColor DynamicField::query(const Spacetime& p) const {
  require_in_domain(p, "query_dynamic");
  Vec in(4);
  in << p.x, p.t;
  const Vec raw = mlp_forward(net_, in);
  DensityColor out;
  out.sigma = softplus(raw(0));
  out.color = Vec3(sigmoid(raw(1)), sigmoid(raw(2)), sigmoid(raw(3)));
  return out;
}

LagrangianDensityHead::LagrangianDensityHead(SineMlp net) : net_(std::move(net)) {
  if (net_.input_dim() != kFeatureDim || net_.output_dim() != 1) {
    throw ShapeError("LagrangianDensityHead: net must map R^16 -> R");
  }
}

LagrangianDensityHead LagrangianDensityHead::make(int width, double omega0, Rng& rng) {
  return LagrangianDensityHead(
      SineMlp::random_init({kFeatureDim, width, width, 1}, omega0, rng));
}

double LagrangianDensityHead::from_feature(const Vec& z) const {
  return softplus(mlp_forward(net_, z)(0));
}

double LagrangianDensityHead::query(const TrajectoryField& f, const Spacetime& p) const {
  return from_feature(f.encode(p));
}

StaticSdfField::StaticSdfField(SineMlp sdf_net, SineMlp color_net)
    : sdf_net_(std::move(sdf_net)), color_net_(std::move(color_net)) {
  if (sdf_net_.input_dim() != 3 || sdf_net_.output_dim() != 1 + kGeomFeatureDim) {
    throw ShapeError("StaticSdfField: sdf net must map R^3 -> (s, g16)");
  }
  if (color_net_.input_dim() != 3 + kGeomFeatureDim + 3 || color_net_.output_dim() != 3) {
    throw ShapeError("StaticSdfField: color net must map (x, g, n) -> rgb");
  }
}

StaticSdfField StaticSdfField::make(int width, int hidden_layers, double omega0, Rng& rng) {
  std::vector<int> sdf_dims;
  sdf_dims.push_back(3);
  for (int i = 0; i < hidden_layers; ++i) sdf_dims.push_back(width);
  sdf_dims.push_back(1 + kGeomFeatureDim);
  std::vector<int> color_dims;
  color_dims.push_back(3 + kGeomFeatureDim + 3);
  for (int i = 0; i < hidden_layers; ++i) color_dims.push_back(width);
  color_dims.push_back(3);
  return StaticSdfField(SineMlp::random_init(sdf_dims, omega0, rng),
                        SineMlp::random_init(color_dims, omega0, rng));
}

double StaticSdfField::sdf(const Vec3& x) const { return mlp_forward(sdf_net_, x)(0); }

Vec3 StaticSdfField::sdf_gradient(const Vec3& x) const {
  const auto spec = std::make_shared<JetSpec>(3);
  JetMat in(3, spec);
  in.value() = x;
  for (int i = 0; i < 3; ++i) in.d1(i)(i) = 1.0;
  const JetMat out = mlp_forward_jet(sdf_net_, in);
  return {out.d1(0)(0), out.d1(1)(0), out.d1(2)(0)};
}

StaticSdfField::Sample StaticSdfField::query(const Vec3& x) const {
  const auto spec = std::make_shared<JetSpec>(3);
  JetMat in(3, spec);
  in.value() = x;
  for (int i = 0; i < 3; ++i) in.d1(i)(i) = 1.0;
  const JetMat out = mlp_forward_jet(sdf_net_, in);

  Sample s;
  s.s = out.value()(0);
  s.geom_feature = out.value().tail(kGeomFeatureDim);
  const Vec3 grad(out.d1(0)(0), out.d1(1)(0), out.d1(2)(0));
  const double glen = grad.norm();
  if (glen <= 1e-6) {
    throw NumericError("query_static: degenerate SDF gradient (|grad s| <= 1e-6)");
  }
  s.normal = grad / glen;

  Vec cin(3 + kGeomFeatureDim + 3);
  cin << x, s.geom_feature, s.normal;
  const Vec rgb = mlp_forward(color_net_, cin);
  s.color = Vec3(sigmoid(rgb(0)), sigmoid(rgb(1)), sigmoid(rgb(2)));
  return s;
}

}  // namespace charflow
