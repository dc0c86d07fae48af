#include "charflow/analytic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace charflow;

namespace {

/// 4th-order central difference, accurate enough for 1e-10 divergence checks.
double fd4(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

double numeric_divergence(const AnalyticFlow& flow, const Vec3& x, double t) {
  double div = 0.0;
  for (int i = 0; i < 3; ++i) {
    div += fd4(
        [&](double v) {
          Vec3 xx = x;
          xx(i) = v;
          return flow.velocity_raw(xx, t)(i);
        },
        x(i), 1e-4);
  }
  return div;
}

}  // namespace

TEST_SUITE("analytic_scenes") {

TEST_CASE("rigid rotation velocity is omega cross x") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 1.0);
  const Vec3 u = flow.velocity({Vec3(1, 0, 0), 0.0});
  CHECK(u.isApprox(Vec3(0, 1, 0), 1e-15));
  const Vec3 u2 = flow.velocity({Vec3(0.3, -0.4, 0.2), 0.5});
  CHECK(u2.isApprox(Vec3(0.4, 0.3, 0.0), 1e-15));
}

TEST_CASE("taylor-green velocity and exact divergence") {
  const auto flow = AnalyticFlow::taylor_green(1.0, 1.0);
  const Vec3 x(0.3, 0.7, 0.0);
  const Vec3 u = flow.velocity({x, 0.0});
  CHECK(u.x() == doctest::Approx(std::sin(0.3) * std::cos(0.7)).epsilon(1e-15));
  CHECK(u.y() == doctest::Approx(-std::cos(0.3) * std::sin(0.7)).epsilon(1e-15));
  CHECK(u.z() == 0.0);
}

TEST_CASE("all flow families are numerically divergence-free") {
  const std::vector<AnalyticFlow> flows = {
      AnalyticFlow::rigid_rotation(Vec3(1, 2, -1).normalized(), 1.3, 0.4),
      AnalyticFlow::translation(Vec3(0.2, -0.5, 0.1)),
      AnalyticFlow::taylor_green(0.8, M_PI),
      AnalyticFlow::abc(0.3, 0.4, 0.5, M_PI),
  };
  Rng rng(5);
  for (const auto& flow : flows) {
    double worst = 0.0;
    for (int i = 0; i < 2500; ++i) {
      const Vec3 x = uniform_in_box(rng, Vec3(-0.9, -0.9, -0.9), Vec3(0.9, 0.9, 0.9));
      worst = std::max(worst, std::abs(numeric_divergence(flow, x, 0.3)));
    }
    CAPTURE(flow.describe());
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("RK4 quarter turn with 50 steps matches the exact rotation map") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 2.0 * M_PI);
  const Spacetime p{Vec3(0.5, 0.0, 0.1), 0.0};
  const Vec3 exact = flow.map_exact(p, 0.25);
  CHECK(exact.isApprox(Vec3(0.0, 0.5, 0.1), 1e-12));
  const Vec3 rk4 = flow.map_rk4(p, 0.25, 50);
  CHECK((rk4 - exact).norm() < 1e-8);
}

TEST_CASE("RK4 shows 4th-order convergence on rotation") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 2.0 * M_PI);
  const Spacetime p{Vec3(0.5, 0.0, 0.0), 0.0};
  const Vec3 exact = flow.map_exact(p, 0.5);
  const double e1 = (flow.map_rk4(p, 0.5, 10) - exact).norm();
  const double e2 = (flow.map_rk4(p, 0.5, 20) - exact).norm();
  CHECK(e1 / e2 > 12.0);  // halving h divides the error by ~16
}

TEST_CASE("exact map composed with its inverse is the identity") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3(0.2, 1.0, 0.3).normalized(), 1.7, 0.25);
  Rng rng(7);
  int checked = 0;
  while (checked < 200) {
    const Vec3 x = uniform_in_box(rng, Vec3(-0.8, -0.8, -0.8), Vec3(0.8, 0.8, 0.8));
    const double ta = uniform(rng, 0.0, 1.0);
    const double tb = uniform(rng, 0.0, 1.0);
    const Vec3 fwd = flow.map_exact({x, ta}, tb);
    if (!in_spatial_box(fwd)) continue;  // inverse query must stay in-domain
    const Vec3 back = flow.map_exact({fwd, tb}, ta);
    CHECK((back - x).norm() < 1e-12);
    ++checked;
  }
}

TEST_CASE("flows without exact maps refuse flow_map_exact") {
  const auto flow = AnalyticFlow::abc(1, 1, 1);
  CHECK_THROWS_AS(flow.map_exact({Vec3::Zero(), 0.0}, 0.5), StateError);
  CHECK_THROWS_AS(flow.map_rk4({Vec3::Zero(), 0.0}, 0.5, 0), ShapeError);
}

TEST_CASE("flow_velocity rejects out-of-domain queries") {
  const auto flow = AnalyticFlow::translation(Vec3(1, 0, 0));
  CHECK_THROWS_AS(flow.velocity({Vec3(2.5, 0, 0), 0.0}), DomainError);
  CHECK_THROWS_AS(flow.velocity({Vec3(0, 0, 0), 1.5}), DomainError);
}

TEST_CASE("advected density: t = 0 reproduces the initial blobs") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 1.0);
  const std::vector<GaussianBlob> blobs = {{Vec3(0.4, 0.0, -0.2), 0.15, 2.0}};
  const AdvectedDensity rho(flow, blobs);
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = uniform_in_box(rng, Vec3(-1, -1, -1), Vec3(1, 1, 1));
    CHECK(rho.density(x, 0.0) == blob_density(blobs, x));
  }
}

TEST_CASE("advected density: translation moves the blob center") {
  const Vec3 u0(0.3, 0.1, -0.2);
  const auto flow = AnalyticFlow::translation(u0);
  const std::vector<GaussianBlob> blobs = {{Vec3(-0.2, 0.0, 0.1), 0.1, 1.5}};
  const AdvectedDensity rho(flow, blobs);
  const double t = 0.8;
  const Vec3 moved = blobs[0].center + t * u0;
  CHECK(rho.density(moved, t) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(rho.density(blobs[0].center, t) < 1.5);
}

TEST_CASE("advected density satisfies the transport equation") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 1.2, 0.3);
  const std::vector<GaussianBlob> blobs = {{Vec3(0.3, 0.1, -0.3), 0.2, 1.0},
                                           {Vec3(-0.2, 0.2, 0.0), 0.15, 0.7}};
  const AdvectedDensity rho(flow, blobs);
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = uniform_in_box(rng, Vec3(-0.7, -0.7, -0.7), Vec3(0.7, 0.7, 0.7));
    const double t = uniform(rng, 0.2, 0.8);
    const double h = 1e-5;
    const double ddt = (rho.density(x, t + h) - rho.density(x, t - h)) / (2 * h);
    Vec3 grad;
    for (int k = 0; k < 3; ++k) {
      Vec3 xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      grad(k) = (rho.density(xp, t) - rho.density(xm, t)) / (2 * h);
    }
    const Vec3 u = flow.velocity_raw(x, t);
    worst = std::max(worst, std::abs(ddt + u.dot(grad)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sphere SDF: exact values, gradient, sign convention") {
  const AnalyticSdf s = AnalyticSdf::sphere(Vec3::Zero(), 1.0);
  CHECK(s.sdf(Vec3(2, 0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.normal(Vec3(2, 0, 0)).isApprox(Vec3(1, 0, 0), 1e-15));
  CHECK(s.sdf(Vec3(0.5, 0, 0)) == doctest::Approx(-0.5).epsilon(1e-15));  // negative inside
  CHECK(s.sdf(Vec3(0, 1, 0)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("analytic SDFs satisfy the eikonal property away from medial axes") {
  const std::vector<std::pair<AnalyticSdf, Vec3>> shapes = {
      {AnalyticSdf::sphere(Vec3(0.1, -0.2, 0.0), 0.3), Vec3(0.1, -0.2, 0.0)},
      {AnalyticSdf::box(Vec3(0.3, 0.2, 0.4)), Vec3::Zero()},
      {AnalyticSdf::capped_cylinder(2, 0.25, 0.35), Vec3::Zero()},
      {AnalyticSdf::translate(AnalyticSdf::sphere(Vec3::Zero(), 0.2), Vec3(0.3, 0.3, -0.1)),
       Vec3(0.3, 0.3, -0.1)},
      {AnalyticSdf::unite(AnalyticSdf::sphere(Vec3(-0.4, 0, 0), 0.2),
                          AnalyticSdf::sphere(Vec3(0.4, 0, 0), 0.2)),
       Vec3(-0.4, 0, 0)},
  };
  Rng rng(13);
  for (const auto& [sdf, center] : shapes) {
    int checked = 0;
    while (checked < 300) {
      const Vec3 x = uniform_in_box(rng, Vec3(-1, -1, -1), Vec3(1, 1, 1));
      if ((x - center).norm() < 0.05) continue;  // stay clear of the medial axis
      const double g = sdf.gradient(x).norm();
      if (std::abs(sdf.sdf(x)) < 1e-3) continue;
      CHECK(std::abs(g - 1.0) < 1e-8);
      ++checked;
    }
  }
}

TEST_CASE("analytic SDF gradients match finite differences") {
  const AnalyticSdf shapes[] = {
      AnalyticSdf::box(Vec3(0.3, 0.2, 0.4)),
      AnalyticSdf::capped_cylinder(1, 0.25, 0.35),
  };
  Rng rng(17);
  for (const auto& sdf : shapes) {
    for (int i = 0; i < 200; ++i) {
      const Vec3 x = uniform_in_box(rng, Vec3(-0.9, -0.9, -0.9), Vec3(0.9, 0.9, 0.9));
      const Vec3 g = sdf.gradient(x);
      bool near_kink = false;
      Vec3 fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 xp = x, xm = x;
        xp(k) += 1e-6;
        xm(k) -= 1e-6;
        fd(k) = (sdf.sdf(xp) - sdf.sdf(xm)) / 2e-6;
      }
      // skip points where the FD stencil straddles a gradient discontinuity
      if ((fd - g).norm() > 1e-3 && std::abs(fd.norm() - 1.0) > 1e-6) near_kink = true;
      if (!near_kink) CHECK((fd - g).norm() < 1e-5);
    }
  }
}

TEST_CASE("obstacle mask: zero inside, cosine ramp, one outside the band") {
  CHECK(obstacle_mask(-0.5, 0.01) == 0.0);
  CHECK(obstacle_mask(0.0, 0.01) == 0.0);
  CHECK(obstacle_mask(0.005, 0.01) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(obstacle_mask(0.01, 0.01) == 1.0);
  CHECK(obstacle_mask(0.3, 0.01) == 1.0);
}

TEST_CASE("synthetic dataset: deterministic, round-trips through disk") {
  const auto flow = AnalyticFlow::rigid_rotation(Vec3::UnitZ(), 1.0, 0.5);
  const std::vector<GaussianBlob> blobs = {{Vec3(0.4, 0.0, -0.3), 0.18, 4.0}};
  const AnalyticSdf obstacle = AnalyticSdf::sphere(Vec3::Zero(), 0.2);
  const AdvectedDensity rho(flow, blobs, &obstacle, 0.01);
  const AnalyticSceneSampler scene(&rho, Vec3(0.9, 0.9, 0.9), &obstacle, Vec3(0.6, 0.45, 0.3));
  const auto cams = front_arc_cameras(2, 2.6, 30.0, 24.0, 16, 16);
  SynthesisParams sp;
  sp.frames = 2;
  sp.samples_per_ray = 32;
  sp.threads = 2;

  const SyntheticSequence a = synthesize_dataset(scene, cams, sp);
  const SyntheticSequence b = synthesize_dataset(scene, cams, sp);
  REQUIRE(a.images.size() == 4);
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    CHECK(a.images[i].pixels == b.images[i].pixels);  // bit-identical renders
  }

  // zero blobs -> images equal static-only renders
  const AnalyticSceneSampler static_only(nullptr, Vec3::Zero(), &obstacle, Vec3(0.6, 0.45, 0.3));
  RenderParams rp;
  rp.dynamic_samples = rp.static_samples = 32;
  const Image st = render_image(static_only, cams[0], 0.0, rp, RenderMode::Static, 1);
  const Image dyn_zero = render_image(static_only, cams[0], 0.0, rp, RenderMode::Composite, 1);
  CHECK(st.pixels == dyn_zero.pixels);

  const std::string dir = (std::filesystem::temp_directory_path() / "charflow_ds_test").string();
  save_dataset(dir, a);
  const SyntheticSequence back = load_dataset(dir);
  REQUIRE(back.frames == a.frames);
  REQUIRE(back.cameras.size() == a.cameras.size());
  CHECK(back.cameras[1].rotation == a.cameras[1].rotation);
  CHECK(back.cameras[1].position == a.cameras[1].position);
  // images round-trip through 8-bit PPM: compare quantized values
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    for (std::size_t p = 0; p < a.images[i].pixels.size(); ++p) {
      for (int k = 0; k < 3; ++k) {
        const double q =
            std::lround(std::clamp(a.images[i].pixels[p](k), 0.0, 1.0) * 255.0) / 255.0;
        CHECK(back.images[i].pixels[p](k) == doctest::Approx(q).epsilon(1e-12));
      }
    }
  }
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
