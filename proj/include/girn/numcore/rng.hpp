#pragma once
// Counter-based deterministic random stream. Identical (seed, counter)
// produce identical draw sequences; no libstdc++ distributions are used,
// so sequences do not depend on the standard library implementation.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace girn::num {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n) without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::below: n must be > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r < limit) return r % n;
    }
  }

  // Standard normal via the Marsaglia polar method (sqrt/log only).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // Normal truncated to mean +/- 2*std by rejection.
  double truncated_normal(double mean, double std) {
    if (!(std > 0.0)) {
      throw std::invalid_argument("truncated_normal: std must be positive");
    }
    for (;;) {
      const double z = normal();
      if (z >= -2.0 && z <= 2.0) return mean + std * z;
    }
  }

  // Independent substream keyed by an id; does not advance this stream.
  RngStream derive(std::uint64_t stream_id) const {
    return RngStream(mix64(seed_ ^ mix64(stream_id + 0x632BE59BD9B4E019ULL)));
  }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

// Parameter-block initialization from a truncated normal.
inline std::vector<double> init_truncated_normal(
    const std::vector<std::size_t>& shape, double mean, double std,
    RngStream& rng) {
  if (shape.empty()) {
    throw std::invalid_argument("init_truncated_normal: empty shape");
  }
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  std::vector<double> out(n);
  for (double& v : out) v = rng.truncated_normal(mean, std);
  return out;
}

}  // namespace girn::num
