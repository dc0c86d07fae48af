#pragma once

#include "charflow/sine_mlp.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace charflow::testing {

/// Central finite difference of a scalar function.
inline double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Second-order central difference d^2 f / dx^2.
inline double fd_second(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Mixed second difference d^2 f / (dx dy).
inline double fd_mixed(const std::function<double(double, double)>& f, double x, double y,
                       double h) {
  return (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
         (4.0 * h * h);
}

inline double rel_err(double got, double want, double floor_scale) {
  return std::abs(got - want) / std::max(floor_scale, std::abs(want));
}

inline SineMlp random_small_net(Rng& rng, int in_dim, int out_dim, int hidden, int width,
                                double omega0) {
  std::vector<int> dims;
  dims.push_back(in_dim);
  for (int i = 0; i < hidden; ++i) dims.push_back(width);
  dims.push_back(out_dim);
  return SineMlp::random_init(dims, omega0, rng);
}

/// Reference jet propagation using scalar Jet2 arithmetic, layer by layer and
/// neuron by neuron. Slow; used as an independent oracle for the vectorized
/// jet path.
inline std::vector<Jet2> reference_forward_jet(const SineMlp& net, const std::vector<Jet2>& x) {
  std::vector<Jet2> h = x;
  const auto& spec = x.front().spec();
  for (int l = 0; l < net.layer_count(); ++l) {
    const Mat& w = net.weight(l);
    const Vec& b = net.bias(l);
    std::vector<Jet2> a;
    a.reserve(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      Jet2 acc = Jet2::constant(b(i), spec);
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        acc += h[static_cast<std::size_t>(j)] * w(i, j);
      }
      if (l + 1 < net.layer_count() && net.activation() == SineMlp::Activation::Sine) {
        acc = sin(acc * net.layer_omega(l));
      }
      a.push_back(std::move(acc));
    }
    h = std::move(a);
  }
  return h;
}

/// Runs fn for every scalar parameter of the net, passing a mutable reference.
inline void for_each_param(SineMlp& net, const std::function<void(double&)>& fn) {
  for (int l = 0; l < net.layer_count(); ++l) {
    Mat& w = net.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) fn(w(i, j));
    }
    Vec& b = net.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) fn(b(i));
  }
}

/// Gathers tape gradients in the same order as for_each_param.
inline std::vector<double> flatten_tape(const ParamTape& tape) {
  std::vector<double> out;
  for (int l = 0; l < tape.layer_count(); ++l) {
    const Mat& w = tape.weight_grad(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) out.push_back(w(i, j));
    }
    const Vec& b = tape.bias_grad(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) out.push_back(b(i));
  }
  return out;
}

/// Central finite difference of `loss` w.r.t. every net parameter.
inline std::vector<double> fd_param_gradient(SineMlp& net,
                                             const std::function<double()>& loss, double h) {
  std::vector<double> grads;
  for_each_param(net, [&](double& p) {
    const double saved = p;
    p = saved + h;
    const double up = loss();
    p = saved - h;
    const double dn = loss();
    p = saved;
    grads.push_back((up - dn) / (2.0 * h));
  });
  return grads;
}

}  // namespace charflow::testing
