#pragma once

#include "charflow/camera.hpp"
#include "charflow/image.hpp"

#include <span>
#include <vector>

namespace charflow {

/// Depth samples along one ray. Depths are strictly increasing; deltas are the
/// forward segment lengths (last one runs to the far clip).
struct RaySampleSet {
  std::vector<double> depths;
  std::vector<double> deltas;

  std::size_t size() const { return depths.size(); }
  bool empty() const { return depths.empty(); }
};

/// Stratified bins between ray.near and ray.far; midpoints unless rng is
/// given, in which case samples jitter uniformly inside their bin.
RaySampleSet stratified_samples(const Ray& ray, int n, Rng* rng = nullptr);

/// NeuS opacity from two consecutive SDF samples:
/// alpha = max((phi(s_i) - phi(s_next)) / phi(s_i), 0), phi = sigmoid(sharpness * s).
double sdf_alpha(double s_i, double s_next, double sharpness);

/// d alpha / d (s_i, s_next, sharpness); zero where the max clamps.
void sdf_alpha_grad(double s_i, double s_next, double sharpness, double& d_si, double& d_snext,
                    double& d_sharpness);

/// One merged sample of the depth-sorted compositor.
struct CompositeRecord {
  double depth = 0.0;
  double alpha = 0.0;
  Vec3 color = Vec3::Zero();
  bool dynamic = false;
  int index = -1;  // position within its source sample set
};

/// Front-to-back accumulation over records already sorted by depth:
/// C = sum_i T_i alpha_i c_i + T_final * background, T_i = prod_{j<i}(1-alpha_j).
/// opacity_sum, when requested, accumulates sum_i T_i alpha_i.
Vec3 composite_records(std::span<const CompositeRecord> records, const Vec3& background,
                       double* final_transmittance = nullptr, double* opacity_sum = nullptr);

/// Reverse pass of composite_records for a gradient `upstream` = dL/dC.
/// d_alpha[k] and d_color[k] are indexed like `records`.
void composite_records_backward(std::span<const CompositeRecord> records, const Vec3& background,
                                const Vec3& upstream, std::span<double> d_alpha,
                                std::span<Vec3> d_color);

/// Fields the renderer marches through. Implemented by the scene model and by
/// the analytic ground-truth scenes.
class SceneSampler {
 public:
  virtual ~SceneSampler() = default;
  virtual void dynamic_at(const Vec3& x, double t, double& sigma, Vec3& color) const = 0;
  virtual bool has_static() const = 0;
  virtual double static_sdf_at(const Vec3& x) const = 0;
  virtual Vec3 static_color_at(const Vec3& x, const Vec3& view_dir) const = 0;
  virtual double sdf_sharpness() const { return 20.0; }
};

/// Per-frame coarse occupancy for skip-marching (optional acceleration).
struct OccupancyGrid {
  int resolution = 32;
  double threshold = 0.01;
  std::vector<std::uint8_t> cells;

  bool occupied(const Vec3& x) const;

  static OccupancyGrid build(const std::function<double(const Vec3&)>& sigma, int resolution,
                             double threshold);
};

struct RenderParams {
  int dynamic_samples = 64;
  int static_samples = 64;
  Vec3 background = Vec3::Zero();
  const OccupancyGrid* occupancy = nullptr;  // skip dynamic samples in empty cells
};

struct DynamicRenderResult {
  Vec3 color = Vec3::Zero();
  double transmittance = 1.0;
  double opacity = 0.0;  // accumulated sum of T_i alpha_i
};

/// Radiance accumulation over the dynamic field only (empty sample sets fall
/// back to the background color with T = 1).
DynamicRenderResult render_dynamic(const SceneSampler& scene, const Ray& ray, double t,
                                   const RenderParams& params, Rng* rng = nullptr);

/// Static SDF surface rendering via NeuS alphas.
Vec3 render_static(const SceneSampler& scene, const Ray& ray, const RenderParams& params,
                   Rng* rng = nullptr);

/// Depth-sorted merge of static and dynamic samples. With zero smoke density
/// this is bit-equal to render_static.
Vec3 render_composite(const SceneSampler& scene, const Ray& ray, double t,
                      const RenderParams& params, Rng* rng = nullptr);

/// V_r = final dynamic transmittance = 1 - accumulated smoke opacity.
double visibility(const SceneSampler& scene, const Ray& ray, double t,
                  const RenderParams& params);

enum class RenderMode { Dynamic, Static, Composite };

Image render_image(const SceneSampler& scene, const Camera& camera, double t,
                   const RenderParams& params, RenderMode mode, int threads = 1);

/// Builds merged records for one ray. Exposed for the differentiable path:
/// dynamic record `index` refers to dynamic sample i (alpha = 1-exp(-sigma_i
/// delta_i)); static record `index` refers to its NeuS section.
struct RayWorkspace {
  RaySampleSet dynamic;
  RaySampleSet statics;
  std::vector<double> dynamic_sigma;
  std::vector<Vec3> dynamic_color;
  std::vector<double> static_sdf;  // static_samples + 1 section values
  std::vector<Vec3> static_color;
  std::vector<CompositeRecord> records;
};

void build_ray_records(const SceneSampler& scene, const Ray& ray, double t,
                       const RenderParams& params, bool include_dynamic, bool include_static,
                       RayWorkspace& ws, Rng* rng = nullptr);

}  // namespace charflow
