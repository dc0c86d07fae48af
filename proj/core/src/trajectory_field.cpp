#include "charflow/trajectory_field.hpp"

#include <utility>

namespace charflow {

TrajectoryField::TrajectoryField(SineMlp encoder, SineMlp decoder)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)) {
  if (encoder_.input_dim() != 4 || encoder_.output_dim() != kFeatureDim) {
    throw ShapeError("TrajectoryField: encoder must map R^4 -> R^16");
  }
  if (decoder_.input_dim() != kFeatureDim + 1 || decoder_.output_dim() != 3) {
    throw ShapeError("TrajectoryField: decoder must map R^17 -> R^3");
  }
}

TrajectoryField TrajectoryField::make_default(double omega0, Rng& rng) {
  return make(128, 4, 128, 3, omega0, rng);
}

TrajectoryField TrajectoryField::make(int enc_width, int enc_hidden_layers, int dec_width,
                                      int dec_hidden_layers, double omega0, Rng& rng) {
  std::vector<int> enc_dims;
  enc_dims.push_back(4);
  for (int i = 0; i < enc_hidden_layers; ++i) enc_dims.push_back(enc_width);
  enc_dims.push_back(kFeatureDim);
  std::vector<int> dec_dims;
  dec_dims.push_back(kFeatureDim + 1);
  for (int i = 0; i < dec_hidden_layers; ++i) dec_dims.push_back(dec_width);
  dec_dims.push_back(3);
  return TrajectoryField(SineMlp::random_init(enc_dims, omega0, rng),
                         SineMlp::random_init(dec_dims, omega0, rng));
}

Vec make_decoder_input(const Vec& z, double t) {
  Vec zt(z.size() + 1);
  zt.head(z.size()) = z;
  zt(z.size()) = t;
  return zt;
}

Vec TrajectoryField::decoder_input(const Vec& z, double t) const {
  return make_decoder_input(z, t);
}

Vec TrajectoryField::encode(const Spacetime& p) const {
  require_in_domain(p, "encode");
  Vec in(4);
  in << p.x, p.t;
  return mlp_forward(encoder_, in);
}

FlowMapResult TrajectoryField::flow_map(const Spacetime& p, double t_target, MapMode mode,
                                        bool want_jacobian) const {
  require_in_domain(p, "flow_map");
  require_time(t_target, "flow_map target");
  FlowMapResult out;
  out.feature = encode(p);
  const Vec3 at_target = mlp_forward(decoder_, decoder_input(out.feature, t_target));
  if (mode == MapMode::Direct) {
    out.target = at_target;
  } else {
    const Vec3 at_source = mlp_forward(decoder_, decoder_input(out.feature, p.t));
    // grouping keeps the t_target = p.t case exact: x + (d - d) = x
    out.target = p.x + (at_target - at_source);
  }
  if (want_jacobian) {
    const Mat3 direct = map_jacobian(p, t_target);
    if (mode == MapMode::Direct) {
      out.jacobian = direct;
    } else {
      out.jacobian = Mat3::Identity() + direct - map_jacobian(p, p.t);
    }
  }
  return out;
}

Vec3 TrajectoryField::velocity_integral(const Spacetime& p, double t_target) const {
  require_in_domain(p, "velocity_integral");
  require_time(t_target, "velocity_integral target");
  const Vec z = encode(p);
  const Vec3 at_target = mlp_forward(decoder_, decoder_input(z, t_target));
  const Vec3 at_source = mlp_forward(decoder_, decoder_input(z, p.t));
  return at_target - at_source;
}

Vec3 TrajectoryField::extract_velocity(const Spacetime& p) const {
  require_in_domain(p, "extract_velocity");
  const Vec z = encode(p);
  const auto spec = std::make_shared<JetSpec>(1);
  JetMat in(kFeatureDim + 1, spec);
  in.value() = decoder_input(z, p.t);
  in.d1(0)(kFeatureDim) = 1.0;  // seed the decoder time input only
  const JetMat out = mlp_forward_jet(decoder_, in);
  return out.d1(0);
}

Vec3 TrajectoryField::material_acceleration(const Spacetime& p) const {
  require_in_domain(p, "material_acceleration");
  const Vec z = encode(p);
  const auto spec = std::make_shared<JetSpec>(1, std::vector<std::pair<int, int>>{{0, 0}});
  JetMat in(kFeatureDim + 1, spec);
  in.value() = decoder_input(z, p.t);
  in.d1(0)(kFeatureDim) = 1.0;
  const JetMat out = mlp_forward_jet(decoder_, in);
  return out.d2(0);
}

Mat3 TrajectoryField::map_jacobian(const Spacetime& p, double t_target) const {
  require_in_domain(p, "map_jacobian");
  require_time(t_target, "map_jacobian target");
  // Encoder jets along the three spatial directions.
  const auto enc_spec = std::make_shared<JetSpec>(3);
  JetMat enc_in(4, enc_spec);
  enc_in.value() << p.x, p.t;
  for (int j = 0; j < 3; ++j) enc_in.d1(j)(j) = 1.0;
  const JetMat z = mlp_forward_jet(encoder_, enc_in);

  const auto dec_spec = std::make_shared<JetSpec>(3);
  JetMat dec_in(kFeatureDim + 1, dec_spec);
  dec_in.value() = decoder_input(z.value(), t_target);
  for (int j = 0; j < 3; ++j) dec_in.d1(j).head(kFeatureDim) = z.d1(j);
  const JetMat out = mlp_forward_jet(decoder_, dec_in);

  Mat3 m;
  for (int j = 0; j < 3; ++j) m.col(j) = out.d1(j);
  return m;
}

TrajectoryField::VelocitySample TrajectoryField::velocity_with_gradient(
    const Spacetime& p) const {
  require_in_domain(p, "velocity_with_gradient");
  const auto enc_spec = std::make_shared<JetSpec>(3);
  JetMat enc_in(4, enc_spec);
  enc_in.value() << p.x, p.t;
  for (int j = 0; j < 3; ++j) enc_in.d1(j)(j) = 1.0;
  const JetMat z = mlp_forward_jet(encoder_, enc_in);

  // Directions: 3 feature-space images of the spatial axes plus decoder time;
  // pairs (x_j, t) give the velocity Jacobian.
  const auto dec_spec = std::make_shared<JetSpec>(
      4, std::vector<std::pair<int, int>>{{0, 3}, {1, 3}, {2, 3}});
  JetMat dec_in(kFeatureDim + 1, dec_spec);
  dec_in.value() = decoder_input(z.value(), p.t);
  for (int j = 0; j < 3; ++j) dec_in.d1(j).head(kFeatureDim) = z.d1(j);
  dec_in.d1(3)(kFeatureDim) = 1.0;
  const JetMat out = mlp_forward_jet(decoder_, dec_in);

  VelocitySample s;
  s.velocity = out.d1(3);
  for (int j = 0; j < 3; ++j) s.gradient.col(j) = out.d2(j);
  s.divergence = s.gradient.trace();
  return s;
}

Mat3 TrajectoryField::velocity_gradient(const Spacetime& p) const {
  return velocity_with_gradient(p).gradient;
}

double TrajectoryField::velocity_divergence(const Spacetime& p) const {
  return velocity_with_gradient(p).divergence;
}

Vec3 TrajectoryField::vorticity(const Spacetime& p) const {
  const Mat3 g = velocity_with_gradient(p).gradient;
  // curl: (du_z/dy - du_y/dz, du_x/dz - du_z/dx, du_y/dx - du_x/dy)
  return {g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1)};
}

}  // namespace charflow
