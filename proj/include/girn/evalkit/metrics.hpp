#pragma once
// Accuracy and confusion-matrix reporting.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace girn::evalkit {

inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw std::invalid_argument("accuracy: need equal-length, non-empty inputs");
  }
  std::size_t ok = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == labels[i]) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(predictions.size());
}

struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::vector<std::size_t>> counts;  // [truth][prediction]

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : counts) {
      for (std::size_t c : row) n += c;
    }
    return n;
  }

  std::size_t trace() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) n += counts[i][i];
    return n;
  }

  double accuracy() const {
    const std::size_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
  }

  // Row-normalized rates; all-zero rows stay zero.
  std::vector<std::vector<double>> row_rates() const {
    std::vector<std::vector<double>> rates(counts.size(),
                                           std::vector<double>(counts.size(), 0.0));
    for (std::size_t i = 0; i < counts.size(); ++i) {
      std::size_t row_sum = 0;
      for (std::size_t c : counts[i]) row_sum += c;
      if (row_sum == 0) continue;
      for (std::size_t j = 0; j < counts[i].size(); ++j) {
        rates[i][j] = static_cast<double>(counts[i][j]) / static_cast<double>(row_sum);
      }
    }
    return rates;
  }

  std::string to_csv(bool rates = false) const {
    std::ostringstream out;
    out << "truth\\prediction";
    for (const std::string& n : class_names) out << "," << n;
    out << "\n";
    const std::vector<std::vector<double>> r = rates ? row_rates()
                                                     : std::vector<std::vector<double>>{};
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out << class_names[i];
      for (std::size_t j = 0; j < counts[i].size(); ++j) {
        if (rates) {
          out << "," << r[i][j];
        } else {
          out << "," << counts[i][j];
        }
      }
      out << "\n";
    }
    return out.str();
  }
};

inline ConfusionMatrix confusion(const std::vector<int>& predictions,
                                 const std::vector<int>& labels,
                                 const std::vector<std::string>& class_names) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("confusion: prediction/label count mismatch");
  }
  ConfusionMatrix m;
  m.class_names = class_names;
  const int n = static_cast<int>(class_names.size());
  m.counts.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n || predictions[i] < 0 || predictions[i] >= n) {
      throw std::invalid_argument("confusion: class index out of range at sample " +
                                  std::to_string(i));
    }
    m.counts[labels[i]][predictions[i]]++;
  }
  return m;
}

}  // namespace girn::evalkit
