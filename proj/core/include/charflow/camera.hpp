#pragma once

#include "charflow/common.hpp"

#include <vector>

namespace charflow {

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 dir = Vec3::UnitZ();  // unit length
  double near = 0.0;
  double far = 1.0;
};

/// Pinhole camera. Pose maps camera coordinates to world coordinates; the
/// camera looks down its +z axis, y points down the image.
struct Camera {
  Mat3 rotation = Mat3::Identity();  // world <- camera
  Vec3 position = Vec3::Zero();
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  void validate() const;

  /// Ray through the center of pixel (i, j); i is the column, j the row.
  /// Near/far clip against the normalized domain box [-1,1]^3.
  Ray pixel_ray(int i, int j) const;
  Ray ray_through(double px, double py) const;
};

Camera look_at_camera(const Vec3& eye, const Vec3& target, const Vec3& up, double focal_px,
                      int width, int height);

/// Cameras on a front arc, evenly spaced in azimuth, all aimed at the origin.
std::vector<Camera> front_arc_cameras(int count, double radius, double half_angle_deg,
                                      double focal_px, int width, int height,
                                      double elevation_deg = 0.0);

/// Clips [ray.near, ray.far] against an axis-aligned box; false if it misses.
bool clip_ray_to_box(Ray& ray, const Vec3& lo, const Vec3& hi);

}  // namespace charflow
