#include "charflow/sine_mlp.hpp"

#include <cmath>

namespace charflow {

SineMlp::SineMlp(std::vector<int> layer_dims, double omega0)
    : layer_dims_(std::move(layer_dims)), omega0_(omega0) {
  if (layer_dims_.size() < 2) throw ShapeError("SineMlp: need at least input and output dims");
  for (int d : layer_dims_) {
    if (d <= 0) throw ShapeError("SineMlp: layer dims must be positive");
  }
  if (omega0_ <= 0.0) throw ShapeError("SineMlp: omega0 must be positive");
  const int layers = static_cast<int>(layer_dims_.size()) - 1;
  weights_.reserve(layers);
  biases_.reserve(layers);
  for (int l = 0; l < layers; ++l) {
    weights_.emplace_back(Mat::Zero(layer_dims_[l + 1], layer_dims_[l]));
    biases_.emplace_back(Vec::Zero(layer_dims_[l + 1]));
  }
}

SineMlp SineMlp::random_init(std::vector<int> layer_dims, double omega0, Rng& rng) {
  SineMlp net(std::move(layer_dims), omega0);
  for (int l = 0; l < net.layer_count(); ++l) {
    const double fan_in = static_cast<double>(net.layer_dims()[l]);
    const double w_bound = l == 0 ? 1.0 / fan_in : std::sqrt(6.0 / fan_in);
    const double b_bound = 1.0 / std::sqrt(fan_in);
    Mat& w = net.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = uniform(rng, -w_bound, w_bound);
      }
    }
    Vec& b = net.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      b(i) = uniform(rng, -b_bound, b_bound);
    }
  }
  return net;
}

std::size_t SineMlp::parameter_count() const {
  std::size_t n = 0;
  for (int l = 0; l < layer_count(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size()) + static_cast<std::size_t>(biases_[l].size());
  }
  return n;
}

void ParamTape::reset(const SineMlp& net) {
  const int layers = net.layer_count();
  w_.resize(layers);
  w_comp_.resize(layers);
  b_.resize(layers);
  b_comp_.resize(layers);
  for (int l = 0; l < layers; ++l) {
    w_[l] = Mat::Zero(net.weight(l).rows(), net.weight(l).cols());
    w_comp_[l] = w_[l];
    b_[l] = Vec::Zero(net.bias(l).size());
    b_comp_[l] = b_[l];
  }
}

void ParamTape::set_zero() {
  for (auto& m : w_) m.setZero();
  for (auto& m : w_comp_) m.setZero();
  for (auto& v : b_) v.setZero();
  for (auto& v : b_comp_) v.setZero();
}

void ParamTape::accumulate_weight(int layer, const Mat& g) {
  kahan_add(w_[layer], w_comp_[layer], g);
}

void ParamTape::accumulate_bias(int layer, const Vec& g) {
  kahan_add(b_[layer], b_comp_[layer], g);
}

void ParamTape::add(const ParamTape& other) {
  if (other.w_.size() != w_.size()) throw ShapeError("ParamTape::add: layer count mismatch");
  for (std::size_t l = 0; l < w_.size(); ++l) {
    kahan_add(w_[l], w_comp_[l], other.w_[l]);
    kahan_add(w_[l], w_comp_[l], other.w_comp_[l]);
    kahan_add(b_[l], b_comp_[l], other.b_[l]);
    kahan_add(b_[l], b_comp_[l], other.b_comp_[l]);
  }
}

void ParamTape::scale(double s) {
  for (auto& m : w_) m *= s;
  for (auto& m : w_comp_) m *= s;
  for (auto& v : b_) v *= s;
  for (auto& v : b_comp_) v *= s;
}

double ParamTape::squared_norm() const {
  double n = 0.0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    n += (w_[l] + w_comp_[l]).squaredNorm() + (b_[l] + b_comp_[l]).squaredNorm();
  }
  return n;
}

bool ParamTape::all_finite() const {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    if (!w_[l].allFinite() || !b_[l].allFinite()) return false;
  }
  return true;
}

namespace {

void check_input(const SineMlp& net, Eigen::Index got) {
  if (got != net.input_dim()) {
    throw ShapeError("SineMlp forward: input has " + std::to_string(got) + " entries, expected " +
                     std::to_string(net.input_dim()));
  }
}

}  // namespace

Vec mlp_forward(const SineMlp& net, const Vec& x, EvalContext& ctx) {
  check_input(net, x.size());
  const int layers = net.layer_count();
  ctx.inputs.resize(layers);
  ctx.pre.resize(layers);
  Vec h = x;
  for (int l = 0; l < layers; ++l) {
    ctx.inputs[l] = h;
    Vec a = net.weight(l) * h + net.bias(l);
    ctx.pre[l] = a;
    if (l + 1 < layers && net.activation() == SineMlp::Activation::Sine) {
      h = (net.layer_omega(l) * a.array()).sin().matrix();
    } else {
      h = std::move(a);
    }
  }
  ctx.ready = true;
  return h;
}

Vec mlp_forward(const SineMlp& net, const Vec& x) {
  EvalContext ctx;
  return mlp_forward(net, x, ctx);
}

Vec mlp_backward(const SineMlp& net, const Vec& upstream, ParamTape& tape,
                 const EvalContext& ctx) {
  if (!ctx.ready) throw StateError("SineMlp backward: no cached forward pass");
  if (upstream.size() != net.output_dim()) {
    throw ShapeError("SineMlp backward: upstream size mismatch");
  }
  if (!tape.initialized()) tape.reset(net);
  const int layers = net.layer_count();
  Vec g = upstream;  // gradient w.r.t. layer output
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 < layers && net.activation() == SineMlp::Activation::Sine) {
      const double w = net.layer_omega(l);
      g = (g.array() * (w * ctx.pre[l].array()).cos() * w).matrix();
    }
    tape.accumulate_weight(l, g * ctx.inputs[l].transpose());
    tape.accumulate_bias(l, g);
    g = net.weight(l).transpose() * g;
  }
  return g;
}

Jet2 JetMat::row_jet(int r) const {
  Jet2 j(m(r, 0), spec);
  for (int i = 0; i < spec->dirs; ++i) j.d1()(i) = m(r, spec->d1_col(i));
  for (std::size_t p = 0; p < spec->pairs.size(); ++p) {
    j.d2()(static_cast<Eigen::Index>(p)) = m(r, spec->d2_col(static_cast<int>(p)));
  }
  return j;
}

namespace {

/// Sine activation on a jet matrix A (pre-activation) with frequency w.
/// s.val      = sin(w a)
/// s.d1[i]    = w cos(w a) . a.d1[i]
/// s.d2[(i,j)] = w cos(w a) . a.d2[(i,j)] - w^2 sin(w a) . a.d1[i] . a.d1[j]
Mat sine_jet(const JetSpec& spec, const Mat& a, double w) {
  Mat s(a.rows(), a.cols());
  const Eigen::ArrayXd sv = (w * a.col(0).array()).sin();
  const Eigen::ArrayXd cv = (w * a.col(0).array()).cos();
  s.col(0) = sv.matrix();
  for (int i = 0; i < spec.dirs; ++i) {
    s.col(spec.d1_col(i)) = (w * cv * a.col(spec.d1_col(i)).array()).matrix();
  }
  for (std::size_t p = 0; p < spec.pairs.size(); ++p) {
    const auto [i, j] = spec.pairs[p];
    const int pc = spec.d2_col(static_cast<int>(p));
    s.col(pc) = (w * cv * a.col(pc).array() -
                 w * w * sv * a.col(spec.d1_col(i)).array() * a.col(spec.d1_col(j)).array())
                    .matrix();
  }
  return s;
}

/// Reverse of sine_jet: upstream g on the activation channels -> gradient on
/// the pre-activation channels, for the same cached pre-activation a.
Mat sine_jet_backward(const JetSpec& spec, const Mat& a, const Mat& g, double w) {
  Mat r = Mat::Zero(a.rows(), a.cols());
  const Eigen::ArrayXd sv = (w * a.col(0).array()).sin();
  const Eigen::ArrayXd cv = (w * a.col(0).array()).cos();

  r.col(0) = (w * cv * g.col(0).array()).matrix();
  for (int i = 0; i < spec.dirs; ++i) {
    const int ic = spec.d1_col(i);
    r.col(ic) += (w * cv * g.col(ic).array()).matrix();
    r.col(0) += (-w * w * sv * a.col(ic).array() * g.col(ic).array()).matrix();
  }
  for (std::size_t p = 0; p < spec.pairs.size(); ++p) {
    const auto [i, j] = spec.pairs[p];
    const int pc = spec.d2_col(static_cast<int>(p));
    const int ic = spec.d1_col(i);
    const int jc = spec.d1_col(j);
    const Eigen::ArrayXd gp = g.col(pc).array();
    r.col(pc) += (w * cv * gp).matrix();
    r.col(ic) += (-w * w * sv * a.col(jc).array() * gp).matrix();
    r.col(jc) += (-w * w * sv * a.col(ic).array() * gp).matrix();
    r.col(0) += ((-w * w * sv * a.col(pc).array() -
                  w * w * w * cv * a.col(ic).array() * a.col(jc).array()) *
                 gp)
                    .matrix();
  }
  return r;
}

}  // namespace

JetMat mlp_forward_jet(const SineMlp& net, const JetMat& x, JetContext& ctx) {
  check_input(net, x.m.rows());
  if (!x.spec) throw ShapeError("forward_jet: input jet has no spec");
  const int layers = net.layer_count();
  ctx.spec = x.spec;
  ctx.inputs.resize(layers);
  ctx.pre.resize(layers);
  Mat h = x.m;
  for (int l = 0; l < layers; ++l) {
    ctx.inputs[l] = h;
    Mat a = net.weight(l) * h;
    a.col(0) += net.bias(l);
    ctx.pre[l] = a;
    if (l + 1 < layers && net.activation() == SineMlp::Activation::Sine) {
      h = sine_jet(*x.spec, a, net.layer_omega(l));
    } else {
      h = std::move(a);
    }
  }
  ctx.ready = true;
  JetMat out;
  out.m = std::move(h);
  out.spec = x.spec;
  return out;
}

JetMat mlp_forward_jet(const SineMlp& net, const JetMat& x) {
  JetContext ctx;
  return mlp_forward_jet(net, x, ctx);
}

JetMat mlp_backward_through_jet(const SineMlp& net, const JetMat& upstream, ParamTape& tape,
                                const JetContext& ctx) {
  if (!ctx.ready) throw StateError("backward_through_jet: no cached jet forward pass");
  if (!ctx.spec || !upstream.spec || !(*ctx.spec == *upstream.spec)) {
    throw ShapeError("backward_through_jet: jet layout mismatch");
  }
  if (upstream.m.rows() != net.output_dim()) {
    throw ShapeError("backward_through_jet: upstream row count mismatch");
  }
  if (!tape.initialized()) tape.reset(net);
  const int layers = net.layer_count();
  Mat g = upstream.m;  // gradient w.r.t. layer output jet channels
  for (int l = layers - 1; l >= 0; --l) {
    if (l + 1 < layers && net.activation() == SineMlp::Activation::Sine) {
      g = sine_jet_backward(*ctx.spec, ctx.pre[l], g, net.layer_omega(l));
    }
    tape.accumulate_weight(l, g * ctx.inputs[l].transpose());
    tape.accumulate_bias(l, g.col(0));
    g = net.weight(l).transpose() * g;
  }
  JetMat out;
  out.m = std::move(g);
  out.spec = ctx.spec;
  return out;
}

}  // namespace charflow
