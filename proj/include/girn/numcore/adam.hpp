#pragma once
// Adam with bias correction over flat parameter/gradient vectors.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "girn/numcore/params.hpp"

namespace girn::num {

struct OptimizerState {
  std::uint64_t step = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

inline OptimizerState make_optimizer_state(std::size_t param_count, double lr = 1e-4,
                                           double beta1 = 0.9, double beta2 = 0.999,
                                           double epsilon = 1e-8) {
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("adam: betas must lie in (0, 1)");
  }
  OptimizerState st;
  st.first_moment.assign(param_count, 0.0);
  st.second_moment.assign(param_count, 0.0);
  st.lr = lr;
  st.beta1 = beta1;
  st.beta2 = beta2;
  st.epsilon = epsilon;
  return st;
}

inline void adam_step(const std::vector<ParamRef>& params,
                      const std::vector<double>& grads, OptimizerState& st) {
  const std::size_t n = total_size(params);
  if (grads.size() != n || st.first_moment.size() != n || st.second_moment.size() != n) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  const std::uint64_t t = st.step + 1;
  const double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(t));
  std::size_t off = 0;
  for (const ParamRef& r : params) {
    double* p = r.values->data();
    for (std::size_t i = 0; i < r.size(); ++i, ++off) {
      const double g = grads[off];
      st.first_moment[off] = st.beta1 * st.first_moment[off] + (1.0 - st.beta1) * g;
      st.second_moment[off] = st.beta2 * st.second_moment[off] + (1.0 - st.beta2) * g * g;
      const double mhat = st.first_moment[off] / c1;
      const double vhat = st.second_moment[off] / c2;
      p[i] -= st.lr * mhat / (std::sqrt(vhat) + st.epsilon);
    }
  }
  st.step = t;
}

}  // namespace girn::num
