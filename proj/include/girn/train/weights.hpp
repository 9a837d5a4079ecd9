#pragma once
// Inverse-frequency class weights, normalized to mean one.

#include <stdexcept>
#include <vector>

#include "girn/skeldata/types.hpp"

namespace girn::train {

// w_c proportional to 1/freq_c; classes with zero count inherit the weight of
// the rarest nonzero class; the mean weight is 1.
inline std::vector<double> compute_class_weights(const std::vector<std::size_t>& histogram) {
  if (histogram.empty()) throw std::invalid_argument("compute_class_weights: empty histogram");
  std::size_t total = 0;
  for (std::size_t c : histogram) total += c;
  if (total == 0) throw std::invalid_argument("compute_class_weights: all-zero histogram");

  std::vector<double> raw(histogram.size(), 0.0);
  double max_raw = 0.0;
  for (std::size_t c = 0; c < histogram.size(); ++c) {
    if (histogram[c] > 0) {
      raw[c] = static_cast<double>(total) / static_cast<double>(histogram[c]);
      max_raw = std::max(max_raw, raw[c]);
    }
  }
  for (double& r : raw) {
    if (r == 0.0) r = max_raw;
  }
  double mean = 0.0;
  for (double r : raw) mean += r;
  mean /= static_cast<double>(raw.size());
  for (double& r : raw) r /= mean;
  return raw;
}

inline std::vector<std::size_t> action_histogram(
    const std::vector<girn::data::GroupSample>& samples, int n_classes) {
  std::vector<std::size_t> hist(n_classes, 0);
  for (const auto& s : samples) {
    for (const auto& p : s.persons) {
      if (p.action) hist.at(*p.action)++;
    }
  }
  return hist;
}

}  // namespace girn::train
