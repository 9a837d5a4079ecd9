#pragma once
// Order-independent reductions and a deterministic parallel map. Per-sample
// results are combined by a pairwise tree keyed on sample index, so sums do
// not depend on thread count or scheduling.

#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

namespace girn::num {

// Pairwise tree sum of equal-length vectors, reduced in index order.
inline std::vector<double> tree_sum(std::vector<std::vector<double>> parts) {
  if (parts.empty()) throw std::invalid_argument("tree_sum: no inputs");
  while (parts.size() > 1) {
    std::vector<std::vector<double>> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      std::vector<double>& a = parts[i];
      const std::vector<double>& b = parts[i + 1];
      if (a.size() != b.size()) throw std::invalid_argument("tree_sum: length mismatch");
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
      next.push_back(std::move(a));
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts[0]);
}

inline double tree_sum_scalars(const std::vector<double>& parts) {
  if (parts.empty()) throw std::invalid_argument("tree_sum_scalars: no inputs");
  std::vector<double> cur = parts;
  while (cur.size() > 1) {
    std::vector<double> next;
    next.reserve((cur.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < cur.size(); i += 2) next.push_back(cur[i] + cur[i + 1]);
    if (cur.size() % 2 == 1) next.push_back(cur.back());
    cur = std::move(next);
  }
  return cur[0];
}

// Runs fn(i) for i in [0, n) across up to n_threads workers. fn must only
// touch per-index state; results keyed by index stay deterministic.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t n_threads, Fn&& fn) {
  if (n == 0) return;
  if (n_threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min(n_threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([w, n, workers, &fn] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

inline std::size_t default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : std::min<unsigned>(hc, 8);
}

}  // namespace girn::num
