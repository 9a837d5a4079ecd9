#pragma once
// Plain (non-tape) softmax and weighted cross-entropy.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace girn::num {

inline std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

// -class_weights[target] * log(probs[target]), with the probability floored
// at 1e-12 before the log.
inline double weighted_cross_entropy(const std::vector<double>& probs,
                                     std::size_t target_class,
                                     const std::vector<double>& class_weights) {
  if (target_class >= probs.size()) {
    throw std::invalid_argument("weighted_cross_entropy: target out of range");
  }
  if (class_weights.size() != probs.size()) {
    throw std::invalid_argument("weighted_cross_entropy: weight count mismatch");
  }
  const double p = std::max(probs[target_class], 1e-12);
  return -class_weights[target_class] * std::log(p);
}

// Argmax with ties broken toward the lowest index.
inline std::size_t argmax(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace girn::num
