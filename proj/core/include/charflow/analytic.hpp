#pragma once

#include "charflow/camera.hpp"
#include "charflow/domain.hpp"
#include "charflow/image.hpp"
#include "charflow/renderer.hpp"
#include "charflow/sdf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace charflow {

/// Closed-form solenoidal velocity fields used as oracles and as synthetic
/// data generators. Rotation and translation families also expose exact flow
/// maps; the others are integrated with RK4.
class AnalyticFlow {
 public:
  enum class Kind { RigidRotation, Translation, TaylorGreen, Abc };

  /// Rotation about unit `axis` through the origin at rate omega, plus an
  /// optional drift along the axis (lift = 0 gives the pure rotation).
  static AnalyticFlow rigid_rotation(const Vec3& axis, double omega, double lift = 0.0);
  static AnalyticFlow translation(const Vec3& u0);
  static AnalyticFlow taylor_green(double amplitude, double wavenumber);
  static AnalyticFlow abc(double a, double b, double c, double wavenumber = M_PI);

  Kind kind() const { return kind_; }
  std::string describe() const;

  Vec3 velocity(const Spacetime& p) const;
  bool has_exact_map() const;
  Vec3 map_exact(const Spacetime& p, double t_target) const;
  Vec3 map_rk4(const Spacetime& p, double t_target, int steps) const;

  /// Exact map when available, RK4 otherwise.
  Vec3 map(const Spacetime& p, double t_target, int rk4_steps = 32) const;

  /// Velocity without the domain precondition (integrators wander slightly
  /// outside the box).
  Vec3 velocity_raw(const Vec3& x, double t) const;

 private:
  Kind kind_ = Kind::Translation;
  Vec3 axis_ = Vec3::UnitZ();
  Vec3 u0_ = Vec3::Zero();
  double omega_ = 0.0;
  double lift_ = 0.0;
  double amplitude_ = 0.0;
  double wavenumber_ = M_PI;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
};

struct GaussianBlob {
  Vec3 center = Vec3::Zero();
  double sigma = 0.1;
  double amplitude = 1.0;
};

double blob_density(const std::vector<GaussianBlob>& blobs, const Vec3& x);

/// rho(x,t) = rho0(Phi_{t->0}(x)), the exact solution of the transport
/// equation, optionally masked to zero inside (and faded near) an obstacle.
class AdvectedDensity {
 public:
  AdvectedDensity(AnalyticFlow flow, std::vector<GaussianBlob> blobs0,
                  const SdfInterface* obstacle = nullptr, double mask_eps = 0.01,
                  int rk4_steps = 32);

  double density(const Vec3& x, double t) const;
  const AnalyticFlow& flow() const { return flow_; }
  const std::vector<GaussianBlob>& blobs() const { return blobs_; }

 private:
  AnalyticFlow flow_;
  std::vector<GaussianBlob> blobs_;
  const SdfInterface* obstacle_;
  double mask_eps_;
  int rk4_steps_;
};

/// Ground-truth scene adapter for the renderer: exact density, constant
/// emission color, analytic obstacle with Lambert-shaded albedo.
class AnalyticSceneSampler : public SceneSampler {
 public:
  AnalyticSceneSampler(const AdvectedDensity* density, Vec3 smoke_color,
                       const SdfInterface* obstacle, Vec3 obstacle_albedo, double sharpness = 60.0);

  void dynamic_at(const Vec3& x, double t, double& sigma, Vec3& color) const override;
  bool has_static() const override;
  double static_sdf_at(const Vec3& x) const override;
  Vec3 static_color_at(const Vec3& x, const Vec3& view_dir) const override;
  double sdf_sharpness() const override { return sharpness_; }

 private:
  const AdvectedDensity* density_;
  Vec3 smoke_color_;
  const SdfInterface* obstacle_;
  Vec3 obstacle_albedo_;
  double sharpness_;
};

/// A rendered multi-camera sequence plus everything needed to reproduce it.
struct SyntheticSequence {
  std::vector<Camera> cameras;
  int frames = 0;
  std::vector<Image> images;  // images[frame * cameras + cam]
  std::uint64_t seed = 0;
  std::string meta;

  const Image& image(int frame, int cam) const {
    return images[static_cast<std::size_t>(frame) * cameras.size() + static_cast<std::size_t>(cam)];
  }
  double frame_time(int frame) const {
    return frames > 1 ? static_cast<double>(frame) / (frames - 1) : 0.0;
  }
};

struct SynthesisParams {
  int frames = 30;
  int samples_per_ray = 96;
  Vec3 background = Vec3::Zero();
  std::uint64_t seed = 0;
  int threads = 1;
};

SyntheticSequence synthesize_dataset(const AnalyticSceneSampler& scene,
                                     const std::vector<Camera>& cameras,
                                     const SynthesisParams& params);

/// Disk layout: cameras.csv, frame_%04d_cam_%02d.ppm, meta, manifest
/// (FNV-1a 64 content hashes, one line per file).
void save_dataset(const std::string& dir, const SyntheticSequence& seq);
SyntheticSequence load_dataset(const std::string& dir);

std::uint64_t fnv1a_file_hash(const std::string& path);

}  // namespace charflow
