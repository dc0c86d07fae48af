#pragma once

#include "charflow/domain.hpp"
#include "charflow/sine_mlp.hpp"

#include <optional>

namespace charflow {

inline constexpr int kFeatureDim = 16;

/// 1 frame of the long-term mapping diagnostics = 1/120 of the normalized
/// time interval (120-frame sequences).
inline constexpr double kFrameStep = 1.0 / 120.0;

enum class MapMode {
  /// x' = D(E(x,t), t')
  Direct,
  /// x' = x + D(z,t') - D(z,t); exact identity at t' = t.
  Corrected,
};

struct FlowMapResult {
  Vec3 target = Vec3::Zero();
  Vec feature;                   // length 16
  std::optional<Mat3> jacobian;  // d(target)/d(source position)
};

/// Encoder/decoder pair: E maps (x,t) to a trajectory feature z in R^16 that
/// stays constant along a particle's pathline; D maps (z,t') to the position
/// the trajectory traverses at t'. Together they give flow maps between
/// arbitrary times in one feed-forward pass and velocities by
/// time-differentiating D at fixed z.
class TrajectoryField {
 public:
  TrajectoryField() = default;
  TrajectoryField(SineMlp encoder, SineMlp decoder);

  /// Canonical architecture: encoder [4,128,128,128,128,16],
  /// decoder [17,128,128,128,3].
  static TrajectoryField make_default(double omega0, Rng& rng);

  /// Same wiring with configurable hidden width/depth (tests, desk scenes).
  static TrajectoryField make(int enc_width, int enc_hidden_layers, int dec_width,
                              int dec_hidden_layers, double omega0, Rng& rng);

  const SineMlp& encoder() const { return encoder_; }
  const SineMlp& decoder() const { return decoder_; }
  SineMlp& encoder() { return encoder_; }
  SineMlp& decoder() { return decoder_; }

  Vec encode(const Spacetime& p) const;
  FlowMapResult flow_map(const Spacetime& p, double t_target, MapMode mode = MapMode::Corrected,
                         bool want_jacobian = false) const;

  /// Integral of velocity from p.t to t_target along the trajectory through p:
  /// D(z, t_target) - D(z, p.t).
  Vec3 velocity_integral(const Spacetime& p, double t_target) const;

  /// u(x,t) = dD(z,t2)/dt2 at z = E(x,t) held fixed, t2 = t.
  Vec3 extract_velocity(const Spacetime& p) const;

  /// Du/Dt = d^2 D(z,t)/dt^2 at fixed z.
  Vec3 material_acceleration(const Spacetime& p) const;

  /// M_{a->b} = d D(E(x_a,t_a), t_b) / d x_a.
  Mat3 map_jacobian(const Spacetime& p, double t_target) const;

  /// du_i/dx_j of the extracted velocity (row i, column j).
  Mat3 velocity_gradient(const Spacetime& p) const;
  double velocity_divergence(const Spacetime& p) const;
  Vec3 vorticity(const Spacetime& p) const;

  /// Velocity and divergence in one jet pass (shared by losses/reports).
  struct VelocitySample {
    Vec3 velocity;
    Mat3 gradient;
    double divergence;
  };
  VelocitySample velocity_with_gradient(const Spacetime& p) const;

 private:
  Vec decoder_input(const Vec& z, double t) const;

  SineMlp encoder_;
  SineMlp decoder_;
};

/// Assembles the (z, t) decoder input vector.
Vec make_decoder_input(const Vec& z, double t);

}  // namespace charflow
