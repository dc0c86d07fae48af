#include "charflow/camera.hpp"

#include <cmath>

namespace charflow {

void Camera::validate() const {
  if (fx <= 0.0 || fy <= 0.0) throw ConfigError("Camera: focal lengths must be positive");
  if (width <= 0 || height <= 0) throw ConfigError("Camera: resolution must be positive");
  const Mat3 rtr = rotation.transpose() * rotation;
  if ((rtr - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("Camera: rotation is not orthonormal");
  }
}

Ray Camera::ray_through(double px, double py) const {
  Vec3 d_cam((px - cx) / fx, (py - cy) / fy, 1.0);
  Ray r;
  r.origin = position;
  r.dir = (rotation * d_cam).normalized();
  r.near = 0.0;
  r.far = std::numeric_limits<double>::infinity();
  clip_ray_to_box(r, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  return r;
}

Ray Camera::pixel_ray(int i, int j) const { return ray_through(i + 0.5, j + 0.5); }

Camera look_at_camera(const Vec3& eye, const Vec3& target, const Vec3& up, double focal_px,
                      int width, int height) {
  Camera cam;
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right).normalized();
  cam.rotation.col(0) = right;
  cam.rotation.col(1) = down;
  cam.rotation.col(2) = forward;
  cam.position = eye;
  cam.fx = cam.fy = focal_px;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.width = width;
  cam.height = height;
  cam.validate();
  return cam;
}

std::vector<Camera> front_arc_cameras(int count, double radius, double half_angle_deg,
                                      double focal_px, int width, int height,
                                      double elevation_deg) {
  std::vector<Camera> cams;
  cams.reserve(static_cast<std::size_t>(count));
  const double elev = elevation_deg * M_PI / 180.0;
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
    const double az = (2.0 * frac - 1.0) * half_angle_deg * M_PI / 180.0;
    const Vec3 eye(radius * std::sin(az) * std::cos(elev), -radius * std::cos(az) * std::cos(elev),
                   radius * std::sin(elev));
    cams.push_back(look_at_camera(eye, Vec3::Zero(), Vec3::UnitZ(), focal_px, width, height));
  }
  return cams;
}

bool clip_ray_to_box(Ray& ray, const Vec3& lo, const Vec3& hi) {
  double t0 = ray.near;
  double t1 = ray.far;
  for (int i = 0; i < 3; ++i) {
    const double d = ray.dir(i);
    if (std::abs(d) < 1e-15) {
      if (ray.origin(i) < lo(i) || ray.origin(i) > hi(i)) return false;
      continue;
    }
    double ta = (lo(i) - ray.origin(i)) / d;
    double tb = (hi(i) - ray.origin(i)) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t1 <= t0) return false;
  ray.near = t0;
  ray.far = t1;
  return true;
}

}  // namespace charflow
