#include "charflow/image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

namespace charflow {

static_assert(std::endian::native == std::endian::little,
              "raw image serialization assumes a little-endian host");

void write_ppm(const std::string& path, const Image& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("PPM: cannot open for writing: " + path);
  os << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 3);
  for (int j = 0; j < img.height; ++j) {
    for (int i = 0; i < img.width; ++i) {
      const Vec3& c = img.at(i, j);
      for (int k = 0; k < 3; ++k) {
        const double v = std::clamp(c(k), 0.0, 1.0);
        row[static_cast<std::size_t>(i) * 3 + k] =
            static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!os) throw IoError("PPM: write failed: " + path);
}

Image read_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("PPM: cannot open: " + path);
  std::string magic;
  is >> magic;
  if (magic != "P6") throw IoError("PPM: expected P6 in " + path);
  int w = 0, h = 0, maxval = 0;
  is >> w >> h >> maxval;
  if (!is || w <= 0 || h <= 0 || maxval != 255) throw IoError("PPM: bad header in " + path);
  is.get();  // single whitespace after header
  Image img(w, h);
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
  for (int j = 0; j < h; ++j) {
    is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!is) throw IoError("PPM: truncated pixel data in " + path);
    for (int i = 0; i < w; ++i) {
      for (int k = 0; k < 3; ++k) {
        img.at(i, j)(k) = row[static_cast<std::size_t>(i) * 3 + k] / 255.0;
      }
    }
  }
  return img;
}

void write_raw_image(const std::string& path, const Image& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("raw image: cannot open for writing: " + path);
  os.write("CHIM", 4);
  const std::int32_t wh[2] = {img.width, img.height};
  os.write(reinterpret_cast<const char*>(wh), sizeof(wh));
  for (const Vec3& p : img.pixels) {
    os.write(reinterpret_cast<const char*>(p.data()), 3 * sizeof(double));
  }
  if (!os) throw IoError("raw image: write failed: " + path);
}

Image read_raw_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("raw image: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string_view(magic, 4) != "CHIM") throw IoError("raw image: bad magic in " + path);
  std::int32_t wh[2];
  is.read(reinterpret_cast<char*>(wh), sizeof(wh));
  if (!is || wh[0] <= 0 || wh[1] <= 0) throw IoError("raw image: bad dims in " + path);
  Image img(wh[0], wh[1]);
  for (Vec3& p : img.pixels) {
    is.read(reinterpret_cast<char*>(p.data()), 3 * sizeof(double));
  }
  if (!is) throw IoError("raw image: truncated pixel data in " + path);
  return img;
}

double image_mse(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeError("image_mse: dimension mismatch");
  }
  KahanSum acc;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    acc.add((a.pixels[i] - b.pixels[i]).squaredNorm());
  }
  return acc.value() / (3.0 * static_cast<double>(a.pixels.size()));
}

double psnr(const Image& a, const Image& b) {
  const double mse = image_mse(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace charflow
