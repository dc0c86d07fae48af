#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace charflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rng = std::mt19937_64;

/// Query outside the field's spatial box or time interval.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector/matrix dimensions do not match the declared layer or jet layout.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation requires cached state (e.g. backward without a forward pass).
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

inline Vec3 uniform_in_box(Rng& rng, const Vec3& lo, const Vec3& hi) {
  return {uniform(rng, lo.x(), hi.x()), uniform(rng, lo.y(), hi.y()),
          uniform(rng, lo.z(), hi.z())};
}

/// Compensated scalar accumulator (Kahan). Keeps batch reductions
/// insensitive to shard grouping at the 1e-12 level.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  void merge(const KahanSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }
  void reset() { sum_ = comp_ = 0.0; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Elementwise Kahan addition: (value, comp) += x.
template <typename A, typename B, typename C>
void kahan_add(A& value, B& comp, const C& x) {
  const auto y = (x - comp).eval();
  const auto t = (value + y).eval();
  comp = (t - value) - y;
  value = t;
}

/// Splits [0, n) into `shards` contiguous ranges and runs `fn(shard, begin,
/// end)` on worker threads. Shard boundaries depend only on (n, shards), so a
/// fixed shard count gives a fixed reduction order.
void parallel_shards(std::size_t n, int shards,
                     const std::function<void(int, std::size_t, std::size_t)>& fn);

std::string format_double(double v);

}  // namespace charflow
