#include "charflow/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace charflow {

AnalyticFlow AnalyticFlow::rigid_rotation(const Vec3& axis, double omega, double lift) {
  AnalyticFlow f;
  f.kind_ = Kind::RigidRotation;
  f.axis_ = axis.normalized();
  f.omega_ = omega;
  f.lift_ = lift;
  return f;
}

AnalyticFlow AnalyticFlow::translation(const Vec3& u0) {
  AnalyticFlow f;
  f.kind_ = Kind::Translation;
  f.u0_ = u0;
  return f;
}

AnalyticFlow AnalyticFlow::taylor_green(double amplitude, double wavenumber) {
  AnalyticFlow f;
  f.kind_ = Kind::TaylorGreen;
  f.amplitude_ = amplitude;
  f.wavenumber_ = wavenumber;
  return f;
}

AnalyticFlow AnalyticFlow::abc(double a, double b, double c, double wavenumber) {
  AnalyticFlow f;
  f.kind_ = Kind::Abc;
  f.a_ = a;
  f.b_ = b;
  f.c_ = c;
  f.wavenumber_ = wavenumber;
  return f;
}

std::string AnalyticFlow::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::RigidRotation:
      os << "rigid-rotation axis=(" << axis_.x() << "," << axis_.y() << "," << axis_.z()
         << ") omega=" << omega_ << " lift=" << lift_;
      break;
    case Kind::Translation:
      os << "translation u0=(" << u0_.x() << "," << u0_.y() << "," << u0_.z() << ")";
      break;
    case Kind::TaylorGreen:
      os << "taylor-green A=" << amplitude_ << " k=" << wavenumber_;
      break;
    case Kind::Abc:
      os << "abc A=" << a_ << " B=" << b_ << " C=" << c_ << " k=" << wavenumber_;
      break;
  }
  return os.str();
}

Vec3 AnalyticFlow::velocity_raw(const Vec3& x, double /*t*/) const {
  switch (kind_) {
    case Kind::RigidRotation:
      return omega_ * axis_.cross(x) + lift_ * axis_;
    case Kind::Translation:
      return u0_;
    case Kind::TaylorGreen: {
      const double k = wavenumber_;
      return amplitude_ * Vec3(std::sin(k * x.x()) * std::cos(k * x.y()),
                               -std::cos(k * x.x()) * std::sin(k * x.y()), 0.0);
    }
    case Kind::Abc: {
      const double k = wavenumber_;
      return {a_ * std::sin(k * x.z()) + c_ * std::cos(k * x.y()),
              b_ * std::sin(k * x.x()) + a_ * std::cos(k * x.z()),
              c_ * std::sin(k * x.y()) + b_ * std::cos(k * x.x())};
    }
  }
  return Vec3::Zero();
}

Vec3 AnalyticFlow::velocity(const Spacetime& p) const {
  require_in_domain(p, "flow_velocity");
  return velocity_raw(p.x, p.t);
}

bool AnalyticFlow::has_exact_map() const {
  return kind_ == Kind::RigidRotation || kind_ == Kind::Translation;
}

Vec3 AnalyticFlow::map_exact(const Spacetime& p, double t_target) const {
  require_in_domain(p, "flow_map_exact");
  const double dt = t_target - p.t;
  switch (kind_) {
    case Kind::RigidRotation: {
      const Eigen::AngleAxisd rot(omega_ * dt, axis_);
      return rot * p.x + lift_ * dt * axis_;
    }
    case Kind::Translation:
      return p.x + dt * u0_;
    default:
      throw StateError("flow_map_exact: flow has no closed-form map (" + describe() + ")");
  }
}

Vec3 AnalyticFlow::map_rk4(const Spacetime& p, double t_target, int steps) const {
  require_in_domain(p, "flow_map_rk4");
  if (steps < 1) throw ShapeError("flow_map_rk4: steps must be >= 1");
  const double h = (t_target - p.t) / steps;
  Vec3 x = p.x;
  double t = p.t;
  for (int s = 0; s < steps; ++s) {
    const Vec3 k1 = velocity_raw(x, t);
    const Vec3 k2 = velocity_raw(x + 0.5 * h * k1, t + 0.5 * h);
    const Vec3 k3 = velocity_raw(x + 0.5 * h * k2, t + 0.5 * h);
    const Vec3 k4 = velocity_raw(x + h * k3, t + h);
    x += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
    t += h;
  }
  return x;
}

Vec3 AnalyticFlow::map(const Spacetime& p, double t_target, int rk4_steps) const {
  return has_exact_map() ? map_exact(p, t_target) : map_rk4(p, t_target, rk4_steps);
}

double blob_density(const std::vector<GaussianBlob>& blobs, const Vec3& x) {
  double d = 0.0;
  for (const auto& b : blobs) {
    d += b.amplitude * std::exp(-(x - b.center).squaredNorm() / (2.0 * b.sigma * b.sigma));
  }
  return d;
}

AdvectedDensity::AdvectedDensity(AnalyticFlow flow, std::vector<GaussianBlob> blobs0,
                                 const SdfInterface* obstacle, double mask_eps, int rk4_steps)
    : flow_(std::move(flow)),
      blobs_(std::move(blobs0)),
      obstacle_(obstacle),
      mask_eps_(mask_eps),
      rk4_steps_(rk4_steps) {}

double AdvectedDensity::density(const Vec3& x, double t) const {
  Vec3 x0 = x;
  if (t != 0.0) {
    // Backtrace to t = 0 (exact where the flow has a closed-form map). The
    // backtraced point may leave the box; the initial blobs are global.
    const Spacetime here{x, t};
    x0 = flow_.has_exact_map() ? flow_.map_exact(here, 0.0)
                               : flow_.map_rk4(here, 0.0, rk4_steps_);
  }
  double d = blob_density(blobs_, x0);
  if (obstacle_ != nullptr) {
    d *= obstacle_mask(obstacle_->sdf(x), mask_eps_);
  }
  return d;
}

AnalyticSceneSampler::AnalyticSceneSampler(const AdvectedDensity* density, Vec3 smoke_color,
                                           const SdfInterface* obstacle, Vec3 obstacle_albedo,
                                           double sharpness)
    : density_(density),
      smoke_color_(std::move(smoke_color)),
      obstacle_(obstacle),
      obstacle_albedo_(std::move(obstacle_albedo)),
      sharpness_(sharpness) {}

void AnalyticSceneSampler::dynamic_at(const Vec3& x, double t, double& sigma, Vec3& color) const {
  sigma = density_ != nullptr ? density_->density(x, t) : 0.0;
  color = smoke_color_;
}

bool AnalyticSceneSampler::has_static() const { return obstacle_ != nullptr; }

double AnalyticSceneSampler::static_sdf_at(const Vec3& x) const { return obstacle_->sdf(x); }

Vec3 AnalyticSceneSampler::static_color_at(const Vec3& x, const Vec3& /*view_dir*/) const {
  // Lambert shading under a fixed key light; keeps the obstacle visibly 3D
  // without any learned appearance.
  static const Vec3 light = Vec3(0.4, -0.7, 0.6).normalized();
  Vec3 n;
  const Vec3 g = obstacle_->gradient(x);
  const double len = g.norm();
  n = len > 1e-9 ? Vec3(g / len) : Vec3::UnitZ();
  const double lambert = 0.25 + 0.75 * std::max(0.0, n.dot(light));
  return lambert * obstacle_albedo_;
}

SyntheticSequence synthesize_dataset(const AnalyticSceneSampler& scene,
                                     const std::vector<Camera>& cameras,
                                     const SynthesisParams& params) {
  if (cameras.empty()) throw ConfigError("synthesize_dataset: need at least one camera");
  SyntheticSequence seq;
  seq.cameras = cameras;
  seq.frames = params.frames;
  seq.seed = params.seed;
  seq.images.resize(static_cast<std::size_t>(params.frames) * cameras.size());
  RenderParams rp;
  rp.dynamic_samples = params.samples_per_ray;
  rp.static_samples = params.samples_per_ray;
  rp.background = params.background;
  parallel_shards(
      static_cast<std::size_t>(params.frames), params.threads,
      [&](int, std::size_t f_begin, std::size_t f_end) {
        for (std::size_t f = f_begin; f < f_end; ++f) {
          const double t = seq.frame_time(static_cast<int>(f));
          for (std::size_t c = 0; c < cameras.size(); ++c) {
            seq.images[f * cameras.size() + c] =
                render_image(scene, cameras[c], t, rp, RenderMode::Composite, 1);
          }
        }
      });
  return seq;
}

namespace {

namespace fs = std::filesystem;

std::string frame_filename(int frame, int cam) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "frame_%04d_cam_%02d.ppm", frame, cam);
  return buf;
}

}  // namespace

std::uint64_t fnv1a_file_hash(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("hash: cannot open: " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    const std::streamsize n = is.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!is) break;
  }
  return h;
}

void save_dataset(const std::string& dir, const SyntheticSequence& seq) {
  fs::create_directories(dir);
  std::vector<std::string> files;

  {
    std::ofstream os(fs::path(dir) / "cameras.csv");
    if (!os) throw IoError("dataset: cannot write cameras.csv");
    os << "cam,r00,r01,r02,r10,r11,r12,r20,r21,r22,px,py,pz,fx,fy,cx,cy,width,height\n";
    for (std::size_t c = 0; c < seq.cameras.size(); ++c) {
      const Camera& cam = seq.cameras[c];
      os << c;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) os << "," << format_double(cam.rotation(i, j));
      }
      for (int i = 0; i < 3; ++i) os << "," << format_double(cam.position(i));
      os << "," << format_double(cam.fx) << "," << format_double(cam.fy) << ","
         << format_double(cam.cx) << "," << format_double(cam.cy) << "," << cam.width << ","
         << cam.height << "\n";
    }
    files.push_back("cameras.csv");
  }

  for (int f = 0; f < seq.frames; ++f) {
    for (std::size_t c = 0; c < seq.cameras.size(); ++c) {
      const std::string name = frame_filename(f, static_cast<int>(c));
      write_ppm((fs::path(dir) / name).string(), seq.image(f, static_cast<int>(c)));
      files.push_back(name);
    }
  }

  {
    std::ofstream os(fs::path(dir) / "meta");
    os << "frames = " << seq.frames << "\n";
    os << "cameras = " << seq.cameras.size() << "\n";
    os << "seed = " << seq.seed << "\n";
    os << seq.meta;
    files.push_back("meta");
  }

  {
    std::ofstream os(fs::path(dir) / "manifest");
    for (const auto& name : files) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a_file_hash((fs::path(dir) / name).string())));
      os << buf << "  " << name << "\n";
    }
  }
}

SyntheticSequence load_dataset(const std::string& dir) {
  SyntheticSequence seq;
  {
    std::ifstream is(fs::path(dir) / "cameras.csv");
    if (!is) throw IoError("dataset: missing cameras.csv in " + dir);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string cell;
      std::vector<double> vals;
      while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
      if (vals.size() != 19) throw IoError("dataset: malformed camera row");
      Camera cam;
      int k = 1;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) cam.rotation(i, j) = vals[static_cast<std::size_t>(k++)];
      }
      for (int i = 0; i < 3; ++i) cam.position(i) = vals[static_cast<std::size_t>(k++)];
      cam.fx = vals[static_cast<std::size_t>(k++)];
      cam.fy = vals[static_cast<std::size_t>(k++)];
      cam.cx = vals[static_cast<std::size_t>(k++)];
      cam.cy = vals[static_cast<std::size_t>(k++)];
      cam.width = static_cast<int>(vals[static_cast<std::size_t>(k++)]);
      cam.height = static_cast<int>(vals[static_cast<std::size_t>(k)]);
      cam.validate();
      seq.cameras.push_back(cam);
    }
  }
  {
    std::ifstream is(fs::path(dir) / "meta");
    if (!is) throw IoError("dataset: missing meta in " + dir);
    std::string line;
    std::ostringstream extra;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string key, eq;
      ls >> key >> eq;
      if (key == "frames" && eq == "=") {
        ls >> seq.frames;
      } else if (key == "seed" && eq == "=") {
        ls >> seq.seed;
      } else if (key == "cameras" && eq == "=") {
        // count is implied by cameras.csv
      } else {
        extra << line << "\n";
      }
    }
    seq.meta = extra.str();
  }
  seq.images.resize(static_cast<std::size_t>(seq.frames) * seq.cameras.size());
  for (int f = 0; f < seq.frames; ++f) {
    for (std::size_t c = 0; c < seq.cameras.size(); ++c) {
      seq.images[static_cast<std::size_t>(f) * seq.cameras.size() + c] =
          read_ppm((fs::path(dir) / frame_filename(f, static_cast<int>(c))).string());
    }
  }
  return seq;
}

}  // namespace charflow
