#pragma once

#include "charflow/common.hpp"
#include "charflow/jet.hpp"

#include <vector>

namespace charflow {

/// Fixed-topology MLP: sine activation on every hidden layer, affine output.
/// The first hidden layer scales its pre-activation by omega0 inside the sine;
/// later hidden layers use frequency 1 and carry the scale in their weights.
///
/// Nets are immutable during evaluation. All per-evaluation state (cached
/// activations, jets, gradient tapes) lives in caller-owned contexts so one
/// net can evaluate concurrently from many workers.
class SineMlp {
 public:
  enum class Activation { Sine, Identity };

  SineMlp() = default;
  SineMlp(std::vector<int> layer_dims, double omega0);

  /// Sine-network initialization: first layer U(-1/fan_in, 1/fan_in), later
  /// layers U(-sqrt(6/fan_in), +sqrt(6/fan_in)); biases U(-1/sqrt(fan_in), ..).
  static SineMlp random_init(std::vector<int> layer_dims, double omega0, Rng& rng);

  int input_dim() const { return layer_dims_.front(); }
  int output_dim() const { return layer_dims_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  double omega0() const { return omega0_; }
  Activation activation() const { return activation_; }
  void set_activation(Activation a) { activation_ = a; }

  Mat& weight(int layer) { return weights_[layer]; }
  Vec& bias(int layer) { return biases_[layer]; }
  const Mat& weight(int layer) const { return weights_[layer]; }
  const Vec& bias(int layer) const { return biases_[layer]; }

  /// Frequency applied inside the sine of hidden layer `layer`.
  double layer_omega(int layer) const { return layer == 0 ? omega0_ : 1.0; }

  std::size_t parameter_count() const;

 private:
  std::vector<int> layer_dims_;
  std::vector<Mat> weights_;  // [out x in] per layer
  std::vector<Vec> biases_;
  double omega0_ = 30.0;
  Activation activation_ = Activation::Sine;
};

/// Cached activations of one plain forward pass; required by backward().
struct EvalContext {
  std::vector<Vec> inputs;  // inputs[l] = input of layer l
  std::vector<Vec> pre;     // pre[l] = W x + b of layer l
  bool ready = false;
};

/// Per-layer parameter gradient accumulators, shaped like a SineMlp.
/// Accumulation is compensated so shard-merge order does not matter at the
/// 1e-12 level; accumulators are additive across samples and across tapes.
class ParamTape {
 public:
  ParamTape() = default;
  explicit ParamTape(const SineMlp& net) { reset(net); }

  void reset(const SineMlp& net);
  void set_zero();
  bool initialized() const { return !w_.empty(); }
  int layer_count() const { return static_cast<int>(w_.size()); }

  Mat& weight_grad(int layer) { return w_[layer]; }
  Vec& bias_grad(int layer) { return b_[layer]; }
  const Mat& weight_grad(int layer) const { return w_[layer]; }
  const Vec& bias_grad(int layer) const { return b_[layer]; }

  void accumulate_weight(int layer, const Mat& g);
  void accumulate_bias(int layer, const Vec& g);

  /// Adds another tape (compensated); used to merge per-shard tapes.
  void add(const ParamTape& other);
  void scale(double s);

  double squared_norm() const;
  bool all_finite() const;

 private:
  std::vector<Mat> w_, w_comp_;
  std::vector<Vec> b_, b_comp_;
};

/// Evaluates the net. With a context, caches activations for backward().
Vec mlp_forward(const SineMlp& net, const Vec& x, EvalContext& ctx);
Vec mlp_forward(const SineMlp& net, const Vec& x);

/// Reverse pass for loss = upstream . output. Accumulates d(loss)/d(params)
/// into the tape and returns d(loss)/d(input). Requires ctx from mlp_forward.
Vec mlp_backward(const SineMlp& net, const Vec& upstream, ParamTape& tape,
                 const EvalContext& ctx);

/// Jet value of a vector quantity: row r = component r, column 0 = value,
/// columns 1..k = first-order directions, then one column per declared pair.
struct JetMat {
  Mat m;
  JetSpecPtr spec;

  JetMat() = default;
  JetMat(int n, JetSpecPtr s) : m(Mat::Zero(n, s->channels())), spec(std::move(s)) {}

  int rows() const { return static_cast<int>(m.rows()); }
  auto value() { return m.col(0); }
  auto value() const { return m.col(0); }
  auto d1(int i) { return m.col(spec->d1_col(i)); }
  auto d1(int i) const { return m.col(spec->d1_col(i)); }
  auto d2(int p) { return m.col(spec->d2_col(p)); }
  auto d2(int p) const { return m.col(spec->d2_col(p)); }

  /// Extracts row r as a scalar Jet2 (same spec).
  Jet2 row_jet(int r) const;
};

/// Cached jet activations of one forward_jet pass.
struct JetContext {
  JetSpecPtr spec;
  std::vector<Mat> inputs;  // jet input of layer l
  std::vector<Mat> pre;     // pre-activation jet of layer l
  bool ready = false;
};

/// Propagates value + directional derivatives through the net. The value
/// channel follows the exact arithmetic path of mlp_forward; d1/d2 channels
/// are analytic directional derivatives (chain rule, no finite differences).
JetMat mlp_forward_jet(const SineMlp& net, const JetMat& x, JetContext& ctx);
JetMat mlp_forward_jet(const SineMlp& net, const JetMat& x);

/// Reverse pass for a loss on (value, d1, d2) output channels: accumulates
/// d(loss)/d(params) and returns the gradient w.r.t. every input channel
/// (including the seeded direction entries, so jet chains compose).
JetMat mlp_backward_through_jet(const SineMlp& net, const JetMat& upstream,
                                ParamTape& tape, const JetContext& ctx);

}  // namespace charflow
