#pragma once
// Deterministic preprocessing pipeline: gap interpolation, camera-motion
// removal, recentering, height normalization, frame subsampling, and the
// mirroring augmentation.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "girn/skeldata/types.hpp"

namespace girn::data {

inline constexpr int kDefaultMaxGap = 5;

// Fills interior invalid runs of length <= max_gap by linear interpolation
// between the flanking valid frames. Boundary runs and longer runs are left
// untouched.
inline JointTrack interpolate_gaps(const JointTrack& track, int max_gap = kDefaultMaxGap) {
  track.validate_shape();
  const std::size_t T = track.frames();
  bool any_valid = false;
  for (std::size_t t = 0; t < T; ++t) any_valid = any_valid || track.is_valid(t);
  if (!any_valid) throw std::runtime_error("interpolate_gaps: all frames invalid");

  JointTrack out = track;
  std::size_t t = 0;
  while (t < T) {
    if (out.is_valid(t)) {
      ++t;
      continue;
    }
    std::size_t run_end = t;
    while (run_end < T && !out.is_valid(run_end)) ++run_end;
    const bool interior = t > 0 && run_end < T;
    const std::size_t run_len = run_end - t;
    if (interior && run_len <= static_cast<std::size_t>(max_gap)) {
      const std::size_t lo = t - 1;
      const std::size_t hi = run_end;
      for (std::size_t u = t; u < run_end; ++u) {
        const double a = static_cast<double>(u - lo) / static_cast<double>(hi - lo);
        out.set(u, track.x(lo) + a * (track.x(hi) - track.x(lo)),
                track.y(lo) + a * (track.y(hi) - track.y(lo)));
      }
    }
    t = run_end;
  }
  return out;
}

inline GroupSample interpolate_sample(const GroupSample& s, int max_gap = kDefaultMaxGap) {
  GroupSample out = s;
  for (PersonPose& p : out.persons) {
    for (auto& [name, track] : p.joints) track = interpolate_gaps(track, max_gap);
  }
  return out;
}

namespace detail {

inline double median(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename Fn>
void for_each_track(GroupSample& s, Fn&& fn) {
  for (PersonPose& p : s.persons) {
    for (auto& [name, track] : p.joints) fn(track);
  }
  if (s.object) fn(*s.object);
}

}  // namespace detail

// Estimates per-frame global translation as the median frame-to-frame
// displacement over all valid person joints and subtracts the cumulative
// translation from every track, object included. Frames with no usable
// joints carry the previous frame's estimate.
inline GroupSample remove_camera_motion(const GroupSample& s) {
  const std::size_t T = s.frames();
  if (T == 0) return s;

  std::vector<double> shift_x(T, 0.0), shift_y(T, 0.0);
  double cum_x = 0.0, cum_y = 0.0, prev_dx = 0.0, prev_dy = 0.0;
  for (std::size_t t = 1; t < T; ++t) {
    std::vector<double> dxs, dys;
    for (const PersonPose& p : s.persons) {
      for (const auto& [name, track] : p.joints) {
        if (track.is_valid(t) && track.is_valid(t - 1)) {
          dxs.push_back(track.x(t) - track.x(t - 1));
          dys.push_back(track.y(t) - track.y(t - 1));
        }
      }
    }
    double dx = prev_dx, dy = prev_dy;
    if (!dxs.empty()) {
      dx = detail::median(dxs);
      dy = detail::median(dys);
    }
    prev_dx = dx;
    prev_dy = dy;
    cum_x += dx;
    cum_y += dy;
    shift_x[t] = cum_x;
    shift_y[t] = cum_y;
  }

  GroupSample out = s;
  detail::for_each_track(out, [&](JointTrack& track) {
    for (std::size_t t = 0; t < T; ++t) {
      if (track.is_valid(t)) track.set(t, track.x(t) - shift_x[t], track.y(t) - shift_y[t]);
    }
  });
  return out;
}

// Moves the mean of all valid person-joint coordinates (over persons, joints
// and frames) to the origin; the object track is shifted by the same offset.
inline GroupSample recenter(const GroupSample& s) {
  double sum_x = 0.0, sum_y = 0.0;
  std::size_t n = 0;
  for (const PersonPose& p : s.persons) {
    for (const auto& [name, track] : p.joints) {
      for (std::size_t t = 0; t < track.frames(); ++t) {
        if (track.is_valid(t)) {
          sum_x += track.x(t);
          sum_y += track.y(t);
          ++n;
        }
      }
    }
  }
  if (n == 0) throw std::runtime_error("recenter: no valid joint coordinates");
  const double cx = sum_x / static_cast<double>(n);
  const double cy = sum_y / static_cast<double>(n);

  GroupSample out = s;
  detail::for_each_track(out, [&](JointTrack& track) {
    for (std::size_t t = 0; t < track.frames(); ++t) {
      if (track.is_valid(t)) track.set(t, track.x(t) - cx, track.y(t) - cy);
    }
  });
  return out;
}

// Scales all coordinates by 1 / frame_height so clips from different
// resolutions share units.
inline GroupSample rescale_by_height(const GroupSample& s) {
  if (s.res_height <= 0) throw std::runtime_error("rescale: non-positive frame height");
  const double inv = 1.0 / static_cast<double>(s.res_height);
  GroupSample out = s;
  detail::for_each_track(out, [&](JointTrack& track) {
    for (std::size_t t = 0; t < track.frames(); ++t) {
      if (track.is_valid(t)) track.set(t, track.x(t) * inv, track.y(t) * inv);
    }
  });
  return out;
}

// Keeps frames 0, 2, 4, ..., 40 of a 41-frame clip (21 frames kept).
inline GroupSample subsample_frames(const GroupSample& s, std::size_t stride = 2) {
  if (stride != 2 || s.frames() != kRawFrameCount) {
    throw std::runtime_error("subsample_frames: expected a 41-frame clip with stride 2");
  }
  const std::size_t T_out = (kRawFrameCount + 1) / 2;
  GroupSample out = s;
  detail::for_each_track(out, [&](JointTrack& track) {
    JointTrack sub(T_out);
    for (std::size_t k = 0; k < T_out; ++k) {
      sub.set(k, track.x(2 * k), track.y(2 * k), track.is_valid(2 * k));
    }
    track = std::move(sub);
  });
  return out;
}

// Negates every x coordinate, swaps teams, swaps anatomical left/right joint
// identities, and flips the left/right component of the group label. Expects
// a recentered sample. Involution: mirror(mirror(s)) == s.
inline GroupSample mirror(const GroupSample& s) {
  GroupSample out = s;
  out.group_label = mirror_group_label(s.group_label);
  for (PersonPose& p : out.persons) {
    p.team = p.team == Team::left ? Team::right : Team::left;
    std::map<std::string, JointTrack> flipped;
    for (auto& [name, track] : p.joints) {
      for (std::size_t t = 0; t < track.frames(); ++t) {
        if (track.is_valid(t)) track.set(t, -track.x(t), track.y(t));
      }
      flipped[mirror_joint_name(name)] = std::move(track);
    }
    p.joints = std::move(flipped);
  }
  if (out.object) {
    JointTrack& track = *out.object;
    for (std::size_t t = 0; t < track.frames(); ++t) {
      if (track.is_valid(t)) track.set(t, -track.x(t), track.y(t));
    }
  }
  return out;
}

// Full pipeline: interpolate -> camera motion -> recenter -> rescale ->
// subsample. Produces T = 21 samples in height-normalized units.
inline GroupSample preprocess_clip(const GroupSample& raw, int max_gap = kDefaultMaxGap) {
  GroupSample s = interpolate_sample(raw, max_gap);
  s = remove_camera_motion(s);
  s = recenter(s);
  s = rescale_by_height(s);
  return subsample_frames(s);
}

inline std::vector<GroupSample> preprocess_all(const std::vector<GroupSample>& raw,
                                               int max_gap = kDefaultMaxGap) {
  std::vector<GroupSample> out;
  out.reserve(raw.size());
  for (const GroupSample& s : raw) out.push_back(preprocess_clip(s, max_gap));
  return out;
}

}  // namespace girn::data
