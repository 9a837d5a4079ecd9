#pragma once
// Synthetic desk-scale scenario generator. Scenes hold two teams of skeleton
// trajectories on a 2x3-per-team court plus a ball track. Class structure:
//   - the activity type (set/spike/pass/winpoint) is planted in the designated
//     performer's limb motion and in teammate approach patterns;
//   - the side (left/right) is planted in the ball trajectory endpoint;
//   - with pose_side off, the passive team executes the mirrored choreography,
//     so poses alone cannot resolve the side (ball-dominant side signal);
//   - with pose_side on, only the active team performs and the side is
//     readable from the poses alone.
// Generation is fully determined by (config, seed).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/numcore/rng.hpp"
#include "girn/skeldata/types.hpp"

namespace girn::data {

struct SynthConfig {
  int persons = 12;
  int train = 2000;
  int val = 250;
  int test = 250;
  double jitter_px = 1.5;
  bool pose_side = false;
  std::uint64_t seed = 1;
  int width = 1280;
  int height = 720;
};

struct SynthDataset {
  std::vector<GroupSample> train, val, test;
};

namespace synth_detail {

inline double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

inline double bump(double t, double center, double w) {
  const double u = (t - center) / w;
  return std::exp(-0.5 * u * u);
}

struct Slot {
  Team team;
  bool front;
  int column;  // 0, 1, 2 by court y
};

// Base joint offsets from the person anchor point (image y grows downward).
inline const std::array<std::pair<const char*, std::array<double, 2>>, 7>& joint_offsets() {
  static const std::array<std::pair<const char*, std::array<double, 2>>, 7> offs = {{
      {"Nose", {0.0, -70.0}},
      {"Neck", {0.0, -55.0}},
      {"MidHip", {0.0, 0.0}},
      {"LWrist", {-25.0, -20.0}},
      {"RWrist", {25.0, -20.0}},
      {"LAnkle", {-12.0, 65.0}},
      {"RAnkle", {12.0, 65.0}},
  }};
  return offs;
}

struct Actor {
  Slot slot;
  double base_x = 0.0, base_y = 0.0;
  double sway_amp_x = 0.0, sway_amp_y = 0.0, sway_freq = 1.0, sway_phase = 0.0;
  // per-frame offsets applied to the whole body and to individual wrists
  std::vector<double> body_dx, body_dy;
  std::vector<double> lwrist_dx, lwrist_dy, rwrist_dx, rwrist_dy;
  int action = 8;  // standing

  explicit Actor(std::size_t frames)
      : body_dx(frames, 0.0),
        body_dy(frames, 0.0),
        lwrist_dx(frames, 0.0),
        lwrist_dy(frames, 0.0),
        rwrist_dx(frames, 0.0),
        rwrist_dy(frames, 0.0) {}
};

// type: 0 set, 1 spike, 2 pass, 3 winpoint
inline void apply_performer_motion(Actor& a, int type, double toward_net,
                                   std::size_t frames) {
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = static_cast<double>(f) / static_cast<double>(frames - 1);
    switch (type) {
      case 0: {  // set: both wrists rise overhead and come back
        const double lift = -95.0 * std::sin(M_PI * t);
        a.lwrist_dy[f] += lift;
        a.rwrist_dy[f] += lift;
        a.lwrist_dx[f] += 10.0 * std::sin(M_PI * t);
        a.rwrist_dx[f] += -10.0 * std::sin(M_PI * t);
        break;
      }
      case 1: {  // spike: jump plus one fast overhead swing toward the net
        a.body_dy[f] += -75.0 * bump(t, 0.55, 0.18);
        a.rwrist_dy[f] += -110.0 * bump(t, 0.6, 0.12);
        a.rwrist_dx[f] += toward_net * 45.0 * bump(t, 0.6, 0.15);
        break;
      }
      case 2: {  // pass (dig): wrists converge low, step into the net
        const double r = smoothstep(t / 0.6);
        a.lwrist_dx[f] += 18.0 * r;
        a.rwrist_dx[f] += -18.0 * r;
        a.lwrist_dy[f] += 38.0 * r;
        a.rwrist_dy[f] += 38.0 * r;
        a.body_dx[f] += toward_net * 34.0 * r;
        a.body_dy[f] += 16.0 * bump(t, 0.5, 0.25);
        break;
      }
      case 3: {  // winpoint: repeated hops, arms raised late and waving
        a.body_dy[f] += -42.0 * std::abs(std::sin(2.0 * M_PI * t));
        const double raise = smoothstep((t - 0.25) / 0.5);
        const double wave = std::sin(4.0 * M_PI * t);
        a.lwrist_dy[f] += -85.0 * raise * (0.75 + 0.25 * wave);
        a.rwrist_dy[f] += -85.0 * raise * (0.75 - 0.25 * wave);
        a.lwrist_dx[f] += -22.0 * raise * wave;
        a.rwrist_dx[f] += 22.0 * raise * wave;
        break;
      }
      default: throw std::logic_error("bad activity type");
    }
  }
}

inline void apply_approach_motion(Actor& a, double target_x, double target_y,
                                  double distance, std::size_t frames) {
  const double dx = target_x - a.base_x;
  const double dy = target_y - a.base_y;
  const double norm = std::sqrt(dx * dx + dy * dy);
  if (norm < 1e-9) return;
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = static_cast<double>(f) / static_cast<double>(frames - 1);
    const double r = smoothstep(t);
    a.body_dx[f] += distance * r * dx / norm;
    a.body_dy[f] += distance * r * dy / norm;
  }
}

}  // namespace synth_detail

// One generated scene. `index` seeds the per-sample stream.
inline GroupSample synth_scene(const SynthConfig& cfg, int label, num::RngStream rng) {
  using namespace synth_detail;
  const std::size_t frames = kRawFrameCount;
  const double net_x = cfg.width / 2.0;
  const std::array<double, 3> col_y = {200.0, 360.0, 520.0};
  const double front_dx = 110.0, back_dx = 315.0;

  const Team side = group_label_side(label);
  const int type = group_label_type(label);

  const int n_left = (cfg.persons + 1) / 2;
  const int n_right = cfg.persons - n_left;

  // Slot order per team: front a,m,b then back a,m,b; fronts fill first.
  std::vector<Actor> actors;
  for (Team team : {Team::left, Team::right}) {
    const int count = team == Team::left ? n_left : n_right;
    const double dir = team == Team::left ? 1.0 : -1.0;  // toward the net
    for (int k = 0; k < count; ++k) {
      const bool front = k < 3;
      const int column = k % 3;
      Actor a(frames);
      a.slot = Slot{team, front, column};
      a.base_x = net_x - dir * (front ? front_dx : back_dx) + (rng.uniform() - 0.5) * 24.0;
      a.base_y = col_y[column] + (rng.uniform() - 0.5) * 24.0;
      a.sway_amp_x = 1.0 + 2.0 * rng.uniform();
      a.sway_amp_y = 1.0 + 2.0 * rng.uniform();
      a.sway_freq = 0.5 + rng.uniform();
      a.sway_phase = 2.0 * M_PI * rng.uniform();
      actors.push_back(std::move(a));
    }
  }

  // Choreography for one team; `mirrored` marks the passive-team copy.
  auto choreograph = [&](Team team, int perf_column) {
    const double toward_net = team == Team::left ? 1.0 : -1.0;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < actors.size(); ++i) {
      if (actors[i].slot.team == team) members.push_back(i);
    }
    if (members.empty()) return;

    auto find_slot = [&](bool front, int column) -> std::size_t {
      for (std::size_t i : members) {
        if (actors[i].slot.front == front && actors[i].slot.column == column) return i;
      }
      return members[0];  // degenerate small-team fallback
    };

    if (type == 3) {  // winpoint: the whole team celebrates and huddles
      double cx = 0.0, cy = 0.0;
      for (std::size_t i : members) {
        cx += actors[i].base_x;
        cy += actors[i].base_y;
      }
      cx /= members.size();
      cy /= members.size();
      for (std::size_t i : members) {
        apply_performer_motion(actors[i], 3, toward_net, frames);
        apply_approach_motion(actors[i], cx, cy, 26.0, frames);
        actors[i].action = action_index("jumping");
      }
      return;
    }

    std::size_t perf;
    switch (type) {
      case 0: perf = find_slot(true, 1); break;            // set: front middle
      case 1: perf = find_slot(true, perf_column); break;  // spike: front exterior
      default: perf = find_slot(false, 1); break;          // pass: back middle
    }
    apply_performer_motion(actors[perf], type, toward_net, frames);
    actors[perf].action =
        type == 0 ? action_index("setting")
                  : type == 1 ? action_index("spiking") : action_index("digging");

    for (std::size_t i : members) {
      if (i == perf) continue;
      // a dig pulls the whole team toward the receiver; set and spike move
      // the performer's row mates
      const bool approach = type == 2 || actors[i].slot.front;
      if (approach) {
        apply_approach_motion(actors[i], actors[perf].base_x, actors[perf].base_y,
                              type == 2 ? 24.0 : 20.0, frames);
        actors[i].action = action_index("moving");
      }
    }
  };

  // The spike column is drawn once so the passive copy mirrors it exactly.
  const int spike_col = rng.bernoulli(0.5) ? 0 : 2;
  choreograph(side, spike_col);
  if (!cfg.pose_side) {
    choreograph(side == Team::left ? Team::right : Team::left, spike_col);
  }

  // Remaining bystanders: mostly standing, occasionally waiting.
  for (Actor& a : actors) {
    if (a.action == action_index("standing") && rng.bernoulli(0.2)) {
      a.action = action_index("waiting");
    }
  }

  // Materialize joint tracks.
  GroupSample s;
  s.group_label = label;
  s.res_width = cfg.width;
  s.res_height = cfg.height;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const Actor& a = actors[i];
    PersonPose p;
    p.team = a.slot.team;
    p.action = a.action;
    for (const auto& [name, off] : joint_offsets()) {
      JointTrack track(frames);
      const bool is_lw = std::string(name) == "LWrist";
      const bool is_rw = std::string(name) == "RWrist";
      for (std::size_t f = 0; f < frames; ++f) {
        const double t = static_cast<double>(f) / static_cast<double>(frames - 1);
        double x = a.base_x + off[0] + a.body_dx[f] +
                   a.sway_amp_x * std::sin(2.0 * M_PI * a.sway_freq * t + a.sway_phase);
        double y = a.base_y + off[1] + a.body_dy[f] +
                   a.sway_amp_y * std::sin(2.0 * M_PI * a.sway_freq * t + 1.7 * a.sway_phase);
        if (is_lw) {
          x += a.lwrist_dx[f];
          y += a.lwrist_dy[f];
        } else if (is_rw) {
          x += a.rwrist_dx[f];
          y += a.rwrist_dy[f];
        }
        x += cfg.jitter_px * rng.normal();
        y += cfg.jitter_px * rng.normal();
        track.set(f, x, y);
      }
      p.joints[name] = std::move(track);
    }
    s.persons.push_back(std::move(p));
  }

  // Ball: an arc from near the net toward the active team's side. The arc
  // shape does not depend on the activity type.
  {
    const double sx = net_x + (rng.uniform() - 0.5) * 90.0;
    const double sy = 230.0 + (rng.uniform() - 0.5) * 80.0;
    const double reach = 255.0 + rng.uniform() * 55.0;
    const double ex = side == Team::left ? net_x - reach : net_x + reach;
    const double ey = 430.0 + (rng.uniform() - 0.5) * 100.0;
    const double cx = 0.5 * (sx + ex);
    const double cy = 120.0 + (rng.uniform() - 0.5) * 50.0;
    ObjectTrack ball(frames);
    for (std::size_t f = 0; f < frames; ++f) {
      const double t = static_cast<double>(f) / static_cast<double>(frames - 1);
      const double u = 1.0 - t;
      double x = u * u * sx + 2.0 * u * t * cx + t * t * ex;
      double y = u * u * sy + 2.0 * u * t * cy + t * t * ey;
      x += cfg.jitter_px * rng.normal();
      y += cfg.jitter_px * rng.normal();
      ball.set(f, x, y);
    }
    s.object = std::move(ball);
  }

  // Shuffle the person list so nothing downstream can rely on its order,
  // then assign ids in list order.
  for (std::size_t i = s.persons.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(s.persons[i - 1], s.persons[j]);
  }
  for (std::size_t i = 0; i < s.persons.size(); ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "p%02zu", i);
    s.persons[i].id = buf;
  }
  validate_sample(s);
  return s;
}

inline std::vector<GroupSample> synth_split(const SynthConfig& cfg, int count,
                                            num::RngStream split_rng) {
  std::vector<int> labels(count);
  for (int i = 0; i < count; ++i) labels[i] = i % kGroupClassCount;
  for (std::size_t i = labels.size(); i > 1; --i) {
    std::swap(labels[i - 1], labels[split_rng.below(i)]);
  }
  std::vector<GroupSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(synth_scene(cfg, labels[i], split_rng.derive(1000 + i)));
  }
  return out;
}

inline SynthDataset synth_generate(const SynthConfig& cfg) {
  if (cfg.persons < 2 || cfg.persons > kMaxPersons) {
    throw std::invalid_argument("synth_generate: persons must be in [2, 12]");
  }
  if (cfg.train < 1 || cfg.val < 1 || cfg.test < 1) {
    throw std::invalid_argument("synth_generate: every split needs at least one sample");
  }
  if (cfg.jitter_px < 0.0) {
    throw std::invalid_argument("synth_generate: negative jitter");
  }
  num::RngStream master(cfg.seed);
  SynthDataset ds;
  ds.train = synth_split(cfg, cfg.train, master.derive(1));
  ds.val = synth_split(cfg, cfg.val, master.derive(2));
  ds.test = synth_split(cfg, cfg.test, master.derive(3));
  return ds;
}

}  // namespace girn::data
