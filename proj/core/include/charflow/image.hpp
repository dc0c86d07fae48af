#pragma once

#include "charflow/common.hpp"

#include <string>
#include <vector>

namespace charflow {

/// Row-major RGB image with f64 channels in [0,1] (not enforced until write).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Vec3> pixels;  // pixels[j * width + i]

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, Vec3::Zero()) {}

  Vec3& at(int i, int j) { return pixels[static_cast<std::size_t>(j) * width + i]; }
  const Vec3& at(int i, int j) const { return pixels[static_cast<std::size_t>(j) * width + i]; }
};

/// Binary PPM (P6), 8-bit, values clamped to [0,1] and rounded on write.
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);

/// Loss-grade raw format: "CHIM" magic, width/height i32, f64 RGB triples.
void write_raw_image(const std::string& path, const Image& img);
Image read_raw_image(const std::string& path);

/// 10 log10(1 / MSE) with images in [0,1]; +infinity when MSE == 0.
double psnr(const Image& a, const Image& b);

double image_mse(const Image& a, const Image& b);

}  // namespace charflow
