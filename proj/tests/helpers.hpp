#pragma once
// Shared fixtures for the test suites.

#include <string>
#include <vector>

#include "girn/model/config.hpp"
#include "girn/numcore/rng.hpp"
#include "girn/skeldata/types.hpp"

namespace girn::testing {

// A small in-memory sample: `persons` players split over both teams, wrists
// plus MidHip, an optional ball, T frames, smooth deterministic motion.
inline data::GroupSample make_tiny_sample(std::size_t frames, int persons = 2,
                                          bool with_ball = true, std::uint64_t seed = 17,
                                          int group_label = 3) {
  num::RngStream rng(seed);
  data::GroupSample s;
  s.group_label = group_label;
  s.res_width = 1280;
  s.res_height = 720;
  const int n_left = (persons + 1) / 2;
  for (int i = 0; i < persons; ++i) {
    data::PersonPose p;
    p.id = "p" + std::to_string(i);
    p.team = i < n_left ? data::Team::left : data::Team::right;
    p.action = static_cast<int>(rng.below(data::kActionClassCount));
    const double bx = p.team == data::Team::left ? 500.0 - 40.0 * i : 780.0 + 40.0 * i;
    const double by = 250.0 + 45.0 * i;
    for (const std::string name : {"LWrist", "RWrist", "MidHip"}) {
      data::JointTrack t(frames);
      const double ox = name == "LWrist" ? -25.0 : name == "RWrist" ? 25.0 : 0.0;
      const double oy = name == "MidHip" ? 0.0 : -20.0;
      const double amp = 8.0 + 10.0 * rng.uniform();
      const double phase = 6.28 * rng.uniform();
      for (std::size_t f = 0; f < frames; ++f) {
        const double w = static_cast<double>(f) / frames;
        t.set(f, bx + ox + amp * std::sin(6.28 * w + phase),
              by + oy + amp * std::cos(4.0 * w + phase));
      }
      p.joints[name] = t;
    }
    s.persons.push_back(std::move(p));
  }
  if (with_ball) {
    data::ObjectTrack ball(frames);
    for (std::size_t f = 0; f < frames; ++f) {
      const double w = static_cast<double>(f) / frames;
      ball.set(f, 640.0 - 200.0 * w, 250.0 + 120.0 * w * w);
    }
    s.object = ball;
  }
  return s;
}

// Tiny full model: all types, both attentions, both heads, J2 subsets.
inline model::ModelConfig tiny_config(std::size_t frames) {
  model::ModelConfig cfg;
  cfg.frames = frames;
  cfg.g_widths = {16, 16, 16, 8};
  cfg.f_widths = {16, 8, 8};
  cfg.intra_joints = 2;
  cfg.inter_joints = 2;
  cfg.object_joints = 2;
  cfg.connectivity = pairing::ConnectivityStrategy::dense;
  return cfg;
}

}  // namespace girn::testing
