#pragma once
// Skeleton sequence data model: joint tracks, per-person poses, group samples,
// and the label/joint-name vocabularies.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace girn::data {

enum class Team { left, right };

inline const char* team_name(Team t) { return t == Team::left ? "left" : "right"; }

inline Team team_from_name(const std::string& s) {
  if (s == "left") return Team::left;
  if (s == "right") return Team::right;
  throw std::runtime_error("unknown team '" + s + "'");
}

// One joint's 2-D trajectory: (x_1, y_1, ..., x_T, y_T) plus per-frame
// validity. Invalid frames are stored as (0, 0).
struct JointTrack {
  std::vector<double> coords;
  std::vector<std::uint8_t> valid;

  JointTrack() = default;
  explicit JointTrack(std::size_t frames)
      : coords(2 * frames, 0.0), valid(frames, 1) {}

  std::size_t frames() const { return valid.size(); }
  double x(std::size_t t) const { return coords[2 * t]; }
  double y(std::size_t t) const { return coords[2 * t + 1]; }
  bool is_valid(std::size_t t) const { return valid[t] != 0; }

  void set(std::size_t t, double px, double py, bool ok = true) {
    coords[2 * t] = ok ? px : 0.0;
    coords[2 * t + 1] = ok ? py : 0.0;
    valid[t] = ok ? 1 : 0;
  }

  void invalidate(std::size_t t) { set(t, 0.0, 0.0, false); }

  void validate_shape() const {
    if (coords.size() != 2 * valid.size()) {
      throw std::runtime_error("JointTrack: coords length must be 2 * frame count");
    }
  }

  bool operator==(const JointTrack&) const = default;
};

using ObjectTrack = JointTrack;

struct PersonPose {
  std::string id;
  Team team = Team::left;
  std::optional<int> action;
  std::map<std::string, JointTrack> joints;

  std::size_t frames() const {
    return joints.empty() ? 0 : joints.begin()->second.frames();
  }

  bool operator==(const PersonPose&) const = default;
};

struct GroupSample {
  std::vector<PersonPose> persons;
  std::optional<ObjectTrack> object;
  int group_label = 0;
  int res_width = 0;
  int res_height = 0;

  std::size_t frames() const {
    if (!persons.empty()) return persons.front().frames();
    return object ? object->frames() : 0;
  }

  bool operator==(const GroupSample&) const = default;
};

inline constexpr int kMaxPersons = 12;
inline constexpr int kGroupClassCount = 8;
inline constexpr int kActionClassCount = 9;
inline constexpr std::size_t kRawFrameCount = 41;

// Side-major label order: index ^ 4 flips the side and keeps the type.
inline const std::array<std::string, 8>& group_label_names() {
  static const std::array<std::string, 8> names = {
      "left_set",  "left_spike",  "left_pass",  "left_winpoint",
      "right_set", "right_spike", "right_pass", "right_winpoint"};
  return names;
}

inline int mirror_group_label(int label) { return label ^ 4; }
inline int group_label_type(int label) { return label & 3; }
inline Team group_label_side(int label) { return label < 4 ? Team::left : Team::right; }

inline const std::array<std::string, 9>& action_names() {
  static const std::array<std::string, 9> names = {
      "waiting", "setting", "digging",  "falling", "spiking",
      "blocking", "jumping", "moving", "standing"};
  return names;
}

inline int group_label_index(const std::string& name) {
  const auto& names = group_label_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw std::runtime_error("unknown group label '" + name + "'");
}

inline int action_index(const std::string& name) {
  const auto& names = action_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  throw std::runtime_error("unknown action '" + name + "'");
}

// OpenPose BODY_25 keypoint names; loaders accept any subset of these.
inline const std::array<std::string, 25>& body25_names() {
  static const std::array<std::string, 25> names = {
      "Nose",   "Neck",    "RShoulder", "RElbow",    "RWrist", "LShoulder",
      "LElbow", "LWrist",  "MidHip",    "RHip",      "RKnee",  "RAnkle",
      "LHip",   "LKnee",   "LAnkle",    "REye",      "LEye",   "REar",
      "LEar",   "LBigToe", "LSmallToe", "LHeel",     "RBigToe", "RSmallToe",
      "RHeel"};
  return names;
}

inline bool is_body25_name(const std::string& name) {
  for (const std::string& n : body25_names()) {
    if (n == name) return true;
  }
  return false;
}

// Anatomical mirror partner: LWrist <-> RWrist and so on; unpaired joints
// map to themselves.
inline std::string mirror_joint_name(const std::string& name) {
  if (name.size() > 1 && (name[0] == 'L' || name[0] == 'R')) {
    std::string flipped = name;
    flipped[0] = name[0] == 'L' ? 'R' : 'L';
    if (is_body25_name(flipped)) return flipped;
  }
  return name;
}

inline void validate_sample(const GroupSample& s) {
  if (static_cast<int>(s.persons.size()) > kMaxPersons) {
    throw std::runtime_error("GroupSample: more than 12 persons");
  }
  if (s.group_label < 0 || s.group_label >= kGroupClassCount) {
    throw std::runtime_error("GroupSample: group label out of range");
  }
  const std::size_t t = s.frames();
  for (const PersonPose& p : s.persons) {
    for (const auto& [name, track] : p.joints) {
      track.validate_shape();
      if (track.frames() != t) {
        throw std::runtime_error("GroupSample: track '" + name + "' of person '" + p.id +
                                 "' has inconsistent frame count");
      }
    }
    if (p.action && (*p.action < 0 || *p.action >= kActionClassCount)) {
      throw std::runtime_error("GroupSample: action index out of range");
    }
  }
  if (s.object) {
    s.object->validate_shape();
    if (s.object->frames() != t) {
      throw std::runtime_error("GroupSample: object track has inconsistent frame count");
    }
  }
}

}  // namespace girn::data
