#pragma once
// Reverse-mode gradient tape over vector-valued nodes. Operations append
// nodes in topological order; backward() walks the tape in reverse from the
// scalar root. This covers exactly the operations the model needs, all in
// double precision.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/numcore/rng.hpp"

namespace girn::num {

enum class Activation { relu, tanh, identity };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

struct Var {
  std::size_t idx = static_cast<std::size_t>(-1);
  bool valid() const { return idx != static_cast<std::size_t>(-1); }
};

class Tape {
 public:
  static constexpr double kLogFloor = 1e-12;

  struct Slot {
    std::vector<double> val;
    std::vector<double> grad;  // allocated only when needs_grad
    std::function<void(Tape&)> back;
    bool needs_grad = false;
  };

  std::size_t node_count() const { return slots_.size(); }

  const std::vector<double>& val(Var v) const { return at(v).val; }
  std::vector<double>& grad(Var v) {
    Slot& s = at(v);
    if (!s.needs_grad) throw std::logic_error("Tape::grad: node has no gradient");
    return s.grad;
  }
  std::size_t width(Var v) const { return at(v).val.size(); }

  Var leaf(std::vector<double> values, bool needs_grad = false) {
    return push(std::move(values), needs_grad, {});
  }

  Var zeros(std::size_t n) { return push(std::vector<double>(n, 0.0), false, {}); }

  // y = act(W x + b); W is (out x in), row-major.
  Var dense(Var w, Var b, Var x, Activation act) {
    const std::size_t out = width(b);
    const std::size_t in = width(x);
    if (width(w) != out * in) {
      throw std::invalid_argument("dense: weight shape " + std::to_string(width(w)) +
                                  " != " + std::to_string(out) + "x" + std::to_string(in));
    }
    std::vector<double> y(out);
    {
      const double* wp = at(w).val.data();
      const double* xp = at(x).val.data();
      const double* bp = at(b).val.data();
      for (std::size_t i = 0; i < out; ++i) {
        double acc = bp[i];
        const double* row = wp + i * in;
        for (std::size_t j = 0; j < in; ++j) acc += row[j] * xp[j];
        y[i] = apply_act(acc, act);
      }
    }
    const bool ng = needs_grad(w) || needs_grad(b) || needs_grad(x);
    Var v = push(std::move(y), ng, {});
    if (ng) {
      at(v).back = [v, w, b, x, act, out, in](Tape& t) {
        const std::vector<double>& yv = t.at(v).val;
        const std::vector<double>& gy = t.at(v).grad;
        const double* wp = t.at(w).val.data();
        const double* xp = t.at(x).val.data();
        std::vector<double> gpre(out);
        for (std::size_t i = 0; i < out; ++i) gpre[i] = gy[i] * act_deriv(yv[i], act);
        if (t.needs_grad(b)) {
          double* gb = t.at(b).grad.data();
          for (std::size_t i = 0; i < out; ++i) gb[i] += gpre[i];
        }
        if (t.needs_grad(w)) {
          double* gw = t.at(w).grad.data();
          for (std::size_t i = 0; i < out; ++i) {
            double* row = gw + i * in;
            const double g = gpre[i];
            for (std::size_t j = 0; j < in; ++j) row[j] += g * xp[j];
          }
        }
        if (t.needs_grad(x)) {
          double* gx = t.at(x).grad.data();
          for (std::size_t i = 0; i < out; ++i) {
            const double* row = wp + i * in;
            const double g = gpre[i];
            for (std::size_t j = 0; j < in; ++j) gx[j] += g * row[j];
          }
        }
      };
    }
    return v;
  }

  // y = W x (no bias, no activation); W is (out x in), row-major.
  Var matvec(Var w, Var x, std::size_t out) {
    const std::size_t in = width(x);
    if (width(w) != out * in) {
      throw std::invalid_argument("matvec: weight shape mismatch");
    }
    std::vector<double> y(out);
    {
      const double* wp = at(w).val.data();
      const double* xp = at(x).val.data();
      for (std::size_t i = 0; i < out; ++i) {
        double acc = 0.0;
        const double* row = wp + i * in;
        for (std::size_t j = 0; j < in; ++j) acc += row[j] * xp[j];
        y[i] = acc;
      }
    }
    const bool ng = needs_grad(w) || needs_grad(x);
    Var v = push(std::move(y), ng, {});
    if (ng) {
      at(v).back = [v, w, x, out, in](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        const double* wp = t.at(w).val.data();
        const double* xp = t.at(x).val.data();
        if (t.needs_grad(w)) {
          double* gw = t.at(w).grad.data();
          for (std::size_t i = 0; i < out; ++i) {
            double* row = gw + i * in;
            for (std::size_t j = 0; j < in; ++j) row[j] += gy[i] * xp[j];
          }
        }
        if (t.needs_grad(x)) {
          double* gx = t.at(x).grad.data();
          for (std::size_t i = 0; i < out; ++i) {
            const double* row = wp + i * in;
            for (std::size_t j = 0; j < in; ++j) gx[j] += gy[i] * row[j];
          }
        }
      };
    }
    return v;
  }

  Var tanh_op(Var x) {
    std::vector<double> y(width(x));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(at(x).val[i]);
    const bool ng = needs_grad(x);
    Var v = push(std::move(y), ng, {});
    if (ng) {
      at(v).back = [v, x](Tape& t) {
        const std::vector<double>& yv = t.at(v).val;
        const std::vector<double>& gy = t.at(v).grad;
        double* gx = t.at(x).grad.data();
        for (std::size_t i = 0; i < yv.size(); ++i) gx[i] += gy[i] * (1.0 - yv[i] * yv[i]);
      };
    }
    return v;
  }

  Var concat(const std::vector<Var>& xs) {
    if (xs.empty()) throw std::invalid_argument("concat: no inputs");
    std::vector<double> y;
    bool ng = false;
    for (Var x : xs) {
      const std::vector<double>& xv = at(x).val;
      y.insert(y.end(), xv.begin(), xv.end());
      ng = ng || needs_grad(x);
    }
    Var v = push(std::move(y), ng, {});
    if (ng) {
      std::vector<Var> inputs = xs;
      at(v).back = [v, inputs](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        std::size_t off = 0;
        for (Var x : inputs) {
          const std::size_t n = t.width(x);
          if (t.needs_grad(x)) {
            double* gx = t.at(x).grad.data();
            for (std::size_t i = 0; i < n; ++i) gx[i] += gy[off + i];
          }
          off += n;
        }
      };
    }
    return v;
  }

  // Arithmetic mean of same-width vectors.
  Var mean(const std::vector<Var>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: no inputs");
    const std::size_t n = width(xs[0]);
    std::vector<double> y(n, 0.0);
    bool ng = false;
    for (Var x : xs) {
      if (width(x) != n) throw std::invalid_argument("mean: width mismatch");
      const std::vector<double>& xv = at(x).val;
      for (std::size_t i = 0; i < n; ++i) y[i] += xv[i];
      ng = ng || needs_grad(x);
    }
    const double inv = 1.0 / static_cast<double>(xs.size());
    for (double& e : y) e *= inv;
    Var v = push(std::move(y), ng, {});
    if (ng) {
      std::vector<Var> inputs = xs;
      at(v).back = [v, inputs, inv, n](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        for (Var x : inputs) {
          if (!t.needs_grad(x)) continue;
          double* gx = t.at(x).grad.data();
          for (std::size_t i = 0; i < n; ++i) gx[i] += inv * gy[i];
        }
      };
    }
    return v;
  }

  // y = sum_k w_k x_k; w has one entry per input vector.
  Var weighted_sum(Var w, const std::vector<Var>& xs) {
    if (width(w) != xs.size()) {
      throw std::invalid_argument("weighted_sum: weight count mismatch");
    }
    if (xs.empty()) throw std::invalid_argument("weighted_sum: no inputs");
    const std::size_t n = width(xs[0]);
    std::vector<double> y(n, 0.0);
    bool ng = needs_grad(w);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (width(xs[k]) != n) throw std::invalid_argument("weighted_sum: width mismatch");
      const double wk = at(w).val[k];
      const std::vector<double>& xv = at(xs[k]).val;
      for (std::size_t i = 0; i < n; ++i) y[i] += wk * xv[i];
      ng = ng || needs_grad(xs[k]);
    }
    Var v = push(std::move(y), ng, {});
    if (ng) {
      std::vector<Var> inputs = xs;
      at(v).back = [v, w, inputs, n](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          const std::vector<double>& xv = t.at(inputs[k]).val;
          if (t.needs_grad(w)) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += gy[i] * xv[i];
            t.at(w).grad[k] += acc;
          }
          if (t.needs_grad(inputs[k])) {
            const double wk = t.at(w).val[k];
            double* gx = t.at(inputs[k]).grad.data();
            for (std::size_t i = 0; i < n; ++i) gx[i] += wk * gy[i];
          }
        }
      };
    }
    return v;
  }

  Var dot(Var a, Var b) {
    const std::size_t n = width(a);
    if (width(b) != n) throw std::invalid_argument("dot: width mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += at(a).val[i] * at(b).val[i];
    const bool ng = needs_grad(a) || needs_grad(b);
    Var v = push({acc}, ng, {});
    if (ng) {
      at(v).back = [v, a, b, n](Tape& t) {
        const double g = t.at(v).grad[0];
        if (t.needs_grad(a)) {
          double* ga = t.at(a).grad.data();
          const double* bv = t.at(b).val.data();
          for (std::size_t i = 0; i < n; ++i) ga[i] += g * bv[i];
        }
        if (t.needs_grad(b)) {
          double* gb = t.at(b).grad.data();
          const double* av = t.at(a).val.data();
          for (std::size_t i = 0; i < n; ++i) gb[i] += g * av[i];
        }
      };
    }
    return v;
  }

  // Pack scalar nodes into one vector node.
  Var stack(const std::vector<Var>& scalars) {
    if (scalars.empty()) throw std::invalid_argument("stack: no inputs");
    std::vector<double> y(scalars.size());
    bool ng = false;
    for (std::size_t k = 0; k < scalars.size(); ++k) {
      if (width(scalars[k]) != 1) throw std::invalid_argument("stack: inputs must be scalar");
      y[k] = at(scalars[k]).val[0];
      ng = ng || needs_grad(scalars[k]);
    }
    Var v = push(std::move(y), ng, {});
    if (ng) {
      std::vector<Var> inputs = scalars;
      at(v).back = [v, inputs](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          if (t.needs_grad(inputs[k])) t.at(inputs[k]).grad[0] += gy[k];
        }
      };
    }
    return v;
  }

  // Numerically stable softmax (max subtraction).
  Var softmax(Var x) {
    const std::vector<double>& xv = at(x).val;
    if (xv.empty()) throw std::invalid_argument("softmax: empty input");
    double mx = xv[0];
    for (double e : xv) mx = std::max(mx, e);
    std::vector<double> y(xv.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < xv.size(); ++i) {
      y[i] = std::exp(xv[i] - mx);
      sum += y[i];
    }
    for (double& e : y) e /= sum;
    const bool ng = needs_grad(x);
    Var v = push(std::move(y), ng, {});
    if (ng) {
      at(v).back = [v, x](Tape& t) {
        const std::vector<double>& yv = t.at(v).val;
        const std::vector<double>& gy = t.at(v).grad;
        double inner = 0.0;
        for (std::size_t i = 0; i < yv.size(); ++i) inner += gy[i] * yv[i];
        double* gx = t.at(x).grad.data();
        for (std::size_t i = 0; i < yv.size(); ++i) gx[i] += yv[i] * (gy[i] - inner);
      };
    }
    return v;
  }

  // -weight * log(max(probs[target], 1e-12))
  Var weighted_ce(Var probs, std::size_t target, double weight) {
    if (target >= width(probs)) {
      throw std::invalid_argument("weighted_ce: target index " + std::to_string(target) +
                                  " out of range for " + std::to_string(width(probs)) +
                                  " classes");
    }
    const double p = at(probs).val[target];
    const double loss = -weight * std::log(std::max(p, kLogFloor));
    const bool ng = needs_grad(probs);
    Var v = push({loss}, ng, {});
    if (ng) {
      at(v).back = [v, probs, target, weight](Tape& t) {
        const double p = t.at(probs).val[target];
        if (p > kLogFloor) {
          t.at(probs).grad[target] += t.at(v).grad[0] * (-weight / p);
        }
      };
    }
    return v;
  }

  // Scalar sum_k c_k s_k over scalar nodes.
  Var linear_combination(const std::vector<Var>& scalars,
                         const std::vector<double>& coeffs) {
    if (scalars.size() != coeffs.size()) {
      throw std::invalid_argument("linear_combination: size mismatch");
    }
    double acc = 0.0;
    bool ng = false;
    for (std::size_t k = 0; k < scalars.size(); ++k) {
      if (width(scalars[k]) != 1) {
        throw std::invalid_argument("linear_combination: inputs must be scalar");
      }
      acc += coeffs[k] * at(scalars[k]).val[0];
      ng = ng || needs_grad(scalars[k]);
    }
    Var v = push({acc}, ng, {});
    if (ng) {
      std::vector<Var> inputs = scalars;
      std::vector<double> cs = coeffs;
      at(v).back = [v, inputs, cs](Tape& t) {
        const double g = t.at(v).grad[0];
        for (std::size_t k = 0; k < inputs.size(); ++k) {
          if (t.needs_grad(inputs[k])) t.at(inputs[k]).grad[0] += g * cs[k];
        }
      };
    }
    return v;
  }

  // Inverted dropout; training-mode only (eval callers skip this node).
  Var dropout(Var x, double rate, RngStream& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) {
      throw std::invalid_argument("dropout: rate must be in [0, 1)");
    }
    if (rate == 0.0) return x;
    const double scale = 1.0 / (1.0 - rate);
    std::vector<double> factor(width(x));
    for (double& f : factor) f = rng.uniform() < rate ? 0.0 : scale;
    std::vector<double> y(width(x));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = at(x).val[i] * factor[i];
    const bool ng = needs_grad(x);
    Var v = push(std::move(y), ng, {});
    if (ng) {
      at(v).back = [v, x, factor](Tape& t) {
        const std::vector<double>& gy = t.at(v).grad;
        double* gx = t.at(x).grad.data();
        for (std::size_t i = 0; i < gy.size(); ++i) gx[i] += gy[i] * factor[i];
      };
    }
    return v;
  }

  // Seeds the scalar root with gradient 1 and walks the tape in reverse.
  void backward(Var root) {
    Slot& r = at(root);
    if (r.val.size() != 1) {
      throw std::invalid_argument("backward: root must be a scalar");
    }
    if (!r.needs_grad) {
      throw std::invalid_argument("backward: root does not depend on any gradient leaf");
    }
    r.grad[0] = 1.0;
    for (std::size_t i = root.idx + 1; i-- > 0;) {
      Slot& s = slots_[i];
      if (s.needs_grad && s.back) s.back(*this);
    }
  }

  bool needs_grad(Var v) const { return at(v).needs_grad; }

 private:
  static double apply_act(double x, Activation a) {
    switch (a) {
      case Activation::relu: return x > 0.0 ? x : 0.0;
      case Activation::tanh: return std::tanh(x);
      case Activation::identity: return x;
    }
    return x;
  }

  // Derivative expressed through the output value y = act(x).
  static double act_deriv(double y, Activation a) {
    switch (a) {
      case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
      case Activation::tanh: return 1.0 - y * y;
      case Activation::identity: return 1.0;
    }
    return 1.0;
  }

  Var push(std::vector<double> values, bool needs_grad, std::function<void(Tape&)> back) {
    Slot s;
    s.val = std::move(values);
    s.needs_grad = needs_grad;
    if (needs_grad) s.grad.assign(s.val.size(), 0.0);
    s.back = std::move(back);
    slots_.push_back(std::move(s));
    return Var{slots_.size() - 1};
  }

  Slot& at(Var v) {
    if (!v.valid() || v.idx >= slots_.size()) throw std::logic_error("Tape: bad var");
    return slots_[v.idx];
  }
  const Slot& at(Var v) const {
    if (!v.valid() || v.idx >= slots_.size()) throw std::logic_error("Tape: bad var");
    return slots_[v.idx];
  }

  std::vector<Slot> slots_;
};

}  // namespace girn::num
