#include "charflow/renderer.hpp"

#include "charflow/domain.hpp"

#include <algorithm>
#include <cmath>

namespace charflow {

RaySampleSet stratified_samples(const Ray& ray, int n, Rng* rng) {
  RaySampleSet s;
  if (n <= 0 || !std::isfinite(ray.far) || ray.far <= ray.near) return s;
  const double w = (ray.far - ray.near) / n;
  s.depths.resize(static_cast<std::size_t>(n));
  s.deltas.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double xi = rng ? uniform(*rng, 0.0, 1.0) : 0.5;
    s.depths[static_cast<std::size_t>(i)] = ray.near + (i + xi) * w;
  }
  for (int i = 0; i + 1 < n; ++i) {
    s.deltas[static_cast<std::size_t>(i)] =
        s.depths[static_cast<std::size_t>(i) + 1] - s.depths[static_cast<std::size_t>(i)];
  }
  s.deltas[static_cast<std::size_t>(n) - 1] = ray.far - s.depths[static_cast<std::size_t>(n) - 1];
  return s;
}

namespace {

// log sigmoid(a), stable for large |a|
double log_sigmoid(double a) { return a >= 0.0 ? -std::log1p(std::exp(-a)) : a - std::log1p(std::exp(a)); }

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace

double sdf_alpha(double s_i, double s_next, double sharpness) {
  const double d = log_sigmoid(sharpness * s_next) - log_sigmoid(sharpness * s_i);
  if (d >= 0.0) return 0.0;
  return -std::expm1(d);
}

void sdf_alpha_grad(double s_i, double s_next, double sharpness, double& d_si, double& d_snext,
                    double& d_sharpness) {
  const double d = log_sigmoid(sharpness * s_next) - log_sigmoid(sharpness * s_i);
  if (d >= 0.0) {
    d_si = d_snext = d_sharpness = 0.0;
    return;
  }
  const double dalpha_dd = -std::exp(d);
  const double gi = sigmoid(-sharpness * s_i);      // d log phi / da at a_i
  const double gn = sigmoid(-sharpness * s_next);
  d_si = dalpha_dd * (-sharpness * gi);
  d_snext = dalpha_dd * (sharpness * gn);
  d_sharpness = dalpha_dd * (s_next * gn - s_i * gi);
}

Vec3 composite_records(std::span<const CompositeRecord> records, const Vec3& background,
                       double* final_transmittance, double* opacity_sum) {
  Vec3 color = Vec3::Zero();
  double t = 1.0;
  double opacity = 0.0;
  for (const auto& r : records) {
    const double w = t * r.alpha;
    color += w * r.color;
    opacity += w;
    t *= (1.0 - r.alpha);
  }
  color += t * background;
  if (final_transmittance) *final_transmittance = t;
  if (opacity_sum) *opacity_sum = opacity;
  return color;
}

void composite_records_backward(std::span<const CompositeRecord> records, const Vec3& background,
                                const Vec3& upstream, std::span<double> d_alpha,
                                std::span<Vec3> d_color) {
  const std::size_t n = records.size();
  if (d_alpha.size() != n || d_color.size() != n) {
    throw ShapeError("composite_records_backward: gradient span size mismatch");
  }
  std::vector<double> t(n);
  double acc = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = acc;
    acc *= (1.0 - records[i].alpha);
  }
  // U_k = color arriving from behind sample k (background-terminated suffix).
  Vec3 behind = background;
  for (std::size_t k = n; k-- > 0;) {
    d_color[k] = t[k] * records[k].alpha * upstream;
    d_alpha[k] = upstream.dot(t[k] * (records[k].color - behind));
    behind = records[k].alpha * records[k].color + (1.0 - records[k].alpha) * behind;
  }
}

bool OccupancyGrid::occupied(const Vec3& x) const {
  if (!in_spatial_box(x, 0.0)) return false;
  const double res = static_cast<double>(resolution);
  int idx[3];
  for (int k = 0; k < 3; ++k) {
    const double u = (x(k) + 1.0) * 0.5 * res;
    idx[k] = std::clamp(static_cast<int>(u), 0, resolution - 1);
  }
  return cells[static_cast<std::size_t>((idx[2] * resolution + idx[1]) * resolution + idx[0])] != 0;
}

OccupancyGrid OccupancyGrid::build(const std::function<double(const Vec3&)>& sigma, int resolution,
                                   double threshold) {
  OccupancyGrid g;
  g.resolution = resolution;
  g.threshold = threshold;
  g.cells.assign(static_cast<std::size_t>(resolution) * resolution * resolution, 0);
  const double cell = 2.0 / resolution;
  for (int k = 0; k < resolution; ++k) {
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        bool occ = false;
        for (int c = 0; c < 8 && !occ; ++c) {
          const Vec3 p(-1.0 + (i + 0.25 + 0.5 * (c & 1)) * cell,
                       -1.0 + (j + 0.25 + 0.5 * ((c >> 1) & 1)) * cell,
                       -1.0 + (k + 0.25 + 0.5 * ((c >> 2) & 1)) * cell);
          occ = sigma(p) > threshold;
        }
        g.cells[static_cast<std::size_t>((k * resolution + j) * resolution + i)] = occ ? 1 : 0;
      }
    }
  }
  return g;
}

void build_ray_records(const SceneSampler& scene, const Ray& ray, double t,
                       const RenderParams& params, bool include_dynamic, bool include_static,
                       RayWorkspace& ws, Rng* rng) {
  ws.records.clear();
  ws.dynamic_sigma.clear();
  ws.dynamic_color.clear();
  ws.static_sdf.clear();
  ws.static_color.clear();

  if (include_dynamic) {
    ws.dynamic = stratified_samples(ray, params.dynamic_samples, rng);
    const std::size_t n = ws.dynamic.size();
    ws.dynamic_sigma.resize(n);
    ws.dynamic_color.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 x = ray.origin + ws.dynamic.depths[i] * ray.dir;
      if (params.occupancy != nullptr && !params.occupancy->occupied(x)) {
        ws.dynamic_sigma[i] = 0.0;
        ws.dynamic_color[i] = Vec3::Zero();
        continue;
      }
      scene.dynamic_at(x, t, ws.dynamic_sigma[i], ws.dynamic_color[i]);
    }
  } else {
    ws.dynamic = RaySampleSet{};
  }

  if (include_static && scene.has_static()) {
    ws.statics = stratified_samples(ray, params.static_samples, rng);
    const std::size_t n = ws.statics.size();
    ws.static_sdf.resize(n + 1);
    ws.static_color.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 x = ray.origin + ws.statics.depths[i] * ray.dir;
      ws.static_sdf[i] = scene.static_sdf_at(x);
      ws.static_color[i] = scene.static_color_at(x, ray.dir);
    }
    if (n > 0) {
      ws.static_sdf[n] = scene.static_sdf_at(ray.origin + ray.far * ray.dir);
    }
  } else {
    ws.statics = RaySampleSet{};
  }

  // Merge by depth (both sample sets are already sorted).
  const double sharp = scene.sdf_sharpness();
  std::size_t di = 0, si = 0;
  const std::size_t nd = ws.dynamic.size(), ns = ws.statics.size();
  ws.records.reserve(nd + ns);
  while (di < nd || si < ns) {
    const bool take_dynamic =
        si >= ns || (di < nd && ws.dynamic.depths[di] <= ws.statics.depths[si]);
    CompositeRecord rec;
    if (take_dynamic) {
      rec.depth = ws.dynamic.depths[di];
      rec.alpha = -std::expm1(-ws.dynamic_sigma[di] * ws.dynamic.deltas[di]);
      rec.color = ws.dynamic_color[di];
      rec.dynamic = true;
      rec.index = static_cast<int>(di);
      ++di;
    } else {
      rec.depth = ws.statics.depths[si];
      rec.alpha = sdf_alpha(ws.static_sdf[si], ws.static_sdf[si + 1], sharp);
      rec.color = ws.static_color[si];
      rec.dynamic = false;
      rec.index = static_cast<int>(si);
      ++si;
    }
    ws.records.push_back(rec);
  }
}

DynamicRenderResult render_dynamic(const SceneSampler& scene, const Ray& ray, double t,
                                   const RenderParams& params, Rng* rng) {
  RayWorkspace ws;
  build_ray_records(scene, ray, t, params, true, false, ws, rng);
  DynamicRenderResult out;
  out.color =
      composite_records(ws.records, params.background, &out.transmittance, &out.opacity);
  return out;
}

Vec3 render_static(const SceneSampler& scene, const Ray& ray, const RenderParams& params,
                   Rng* rng) {
  RayWorkspace ws;
  build_ray_records(scene, ray, 0.0, params, false, true, ws, rng);
  return composite_records(ws.records, params.background);
}

Vec3 render_composite(const SceneSampler& scene, const Ray& ray, double t,
                      const RenderParams& params, Rng* rng) {
  RayWorkspace ws;
  build_ray_records(scene, ray, t, params, true, true, ws, rng);
  return composite_records(ws.records, params.background);
}

double visibility(const SceneSampler& scene, const Ray& ray, double t,
                  const RenderParams& params) {
  RayWorkspace ws;
  build_ray_records(scene, ray, t, params, true, false, ws, nullptr);
  double final_t = 1.0;
  composite_records(ws.records, Vec3::Zero(), &final_t, nullptr);
  return final_t;
}

Image render_image(const SceneSampler& scene, const Camera& camera, double t,
                   const RenderParams& params, RenderMode mode, int threads) {
  Image img(camera.width, camera.height);
  parallel_shards(static_cast<std::size_t>(camera.height), threads,
                  [&](int, std::size_t row_begin, std::size_t row_end) {
                    for (std::size_t j = row_begin; j < row_end; ++j) {
                      for (int i = 0; i < camera.width; ++i) {
                        const Ray ray = camera.pixel_ray(i, static_cast<int>(j));
                        Vec3 c;
                        switch (mode) {
                          case RenderMode::Dynamic:
                            c = render_dynamic(scene, ray, t, params).color;
                            break;
                          case RenderMode::Static:
                            c = render_static(scene, ray, params);
                            break;
                          case RenderMode::Composite:
                            c = render_composite(scene, ray, t, params);
                            break;
                        }
                        img.at(i, static_cast<int>(j)) = c;
                      }
                    }
                  });
  return img;
}

}  // namespace charflow
