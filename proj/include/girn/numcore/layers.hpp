#pragma once
// Dense layers and MLP forward over the gradient tape.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/numcore/rng.hpp"
#include "girn/numcore/tape.hpp"

namespace girn::num {

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation act = Activation::identity;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out

  void validate() const {
    if (weights.size() != in * out || bias.size() != out) {
      throw std::invalid_argument("DenseLayer: inconsistent weight/bias shape");
    }
  }
};

inline DenseLayer make_dense(std::size_t in, std::size_t out, Activation act,
                             double init_std, RngStream& rng) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.act = act;
  l.weights = init_truncated_normal({out, in}, 0.0, init_std, rng);
  l.bias.assign(out, 0.0);
  return l;
}

// A layer whose parameters are bound onto a tape.
struct BoundDense {
  Var w;
  Var b;
  std::size_t in = 0;
  std::size_t out = 0;
  Activation act = Activation::identity;
};

inline BoundDense bind_dense(Tape& tape, const DenseLayer& l, bool needs_grad) {
  l.validate();
  return BoundDense{tape.leaf(l.weights, needs_grad), tape.leaf(l.bias, needs_grad),
                    l.in, l.out, l.act};
}

// Forward through a stack of bound layers. Inverted dropout is applied after
// every activation except the last layer's, and only in training mode; in
// evaluation mode the pass is a pure function of (params, input).
inline Var mlp_forward(Tape& tape, const std::vector<BoundDense>& layers, Var input,
                       double dropout_rate, bool training, RngStream* rng) {
  if (layers.empty()) throw std::invalid_argument("mlp_forward: no layers");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("mlp_forward: dropout_rate must be in [0, 1)");
  }
  if (training && dropout_rate > 0.0 && rng == nullptr) {
    throw std::invalid_argument("mlp_forward: training dropout needs an rng");
  }
  Var h = input;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const BoundDense& l = layers[k];
    if (tape.width(h) != l.in) {
      throw std::invalid_argument("mlp_forward: layer " + std::to_string(k) + " expects " +
                                  std::to_string(l.in) + " inputs, got " +
                                  std::to_string(tape.width(h)));
    }
    h = tape.dense(l.w, l.b, h, l.act);
    if (training && dropout_rate > 0.0 && k + 1 < layers.size()) {
      h = tape.dropout(h, dropout_rate, *rng);
    }
  }
  return h;
}

// Convenience overload: binds the layers as non-trainable leaves.
inline std::vector<double> mlp_forward(const std::vector<DenseLayer>& layers,
                                       const std::vector<double>& input,
                                       double dropout_rate, bool training,
                                       RngStream* rng = nullptr) {
  Tape tape;
  std::vector<BoundDense> bound;
  bound.reserve(layers.size());
  for (const DenseLayer& l : layers) bound.push_back(bind_dense(tape, l, false));
  Var out = mlp_forward(tape, bound, tape.leaf(input), dropout_rate, training, rng);
  return tape.val(out);
}

}  // namespace girn::num
