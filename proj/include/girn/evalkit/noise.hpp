#pragma once
// Ball-track noise protocols: Gaussian displacement and coordinate dropout,
// both applied in raw pixel space before preprocessing. Inputs are copied,
// never mutated.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/numcore/rng.hpp"
#include "girn/skeldata/types.hpp"

namespace girn::evalkit {

struct NoiseSpec {
  enum class Kind { displacement, dropout };
  Kind kind = Kind::displacement;
  double std_px = 0.0;       // displacement standard deviation, pixels
  double chance = 0.0;       // dropout probability per frame
  int repetitions = 5;
  std::uint64_t seed = 1;
  bool impute_dropped = false;  // refill dropped frames by interpolation

  double parameter() const { return kind == Kind::displacement ? std_px : chance; }
  const char* kind_name() const {
    return kind == Kind::displacement ? "displacement" : "dropout";
  }
};

// Adds independent zero-mean Gaussian noise per frame per coordinate. The
// std is multiplied by 1.5 on 1920x1080 clips so the displacement stays
// proportional to the frame. std_px = 0 is the exact identity.
inline data::ObjectTrack displacement_noise(const data::ObjectTrack& track, double std_px,
                                            int res_width, int res_height,
                                            num::RngStream& rng) {
  if (std_px < 0.0) throw std::invalid_argument("displacement_noise: negative std");
  data::ObjectTrack out = track;
  if (std_px == 0.0) return out;
  const double scale = (res_width == 1920 && res_height == 1080) ? 1.5 : 1.0;
  const double std_eff = std_px * scale;
  for (std::size_t t = 0; t < out.frames(); ++t) {
    if (!out.is_valid(t)) continue;
    out.set(t, out.x(t) + std_eff * rng.normal(), out.y(t) + std_eff * rng.normal());
  }
  return out;
}

// Zeroes both coordinates of each frame independently with the given chance
// and clears the frame's validity flag.
inline data::ObjectTrack coordinate_dropout(const data::ObjectTrack& track, double chance,
                                            num::RngStream& rng) {
  if (!(chance >= 0.0 && chance <= 1.0)) {
    throw std::invalid_argument("coordinate_dropout: chance must be in [0, 1]");
  }
  data::ObjectTrack out = track;
  for (std::size_t t = 0; t < out.frames(); ++t) {
    if (rng.bernoulli(chance)) out.invalidate(t);
  }
  return out;
}

inline data::ObjectTrack apply_noise(const data::ObjectTrack& track, const NoiseSpec& spec,
                                     int res_width, int res_height, num::RngStream& rng) {
  if (spec.kind == NoiseSpec::Kind::displacement) {
    return displacement_noise(track, spec.std_px, res_width, res_height, rng);
  }
  return coordinate_dropout(track, spec.chance, rng);
}

}  // namespace girn::evalkit
