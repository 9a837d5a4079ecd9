#pragma once
// Joint-subset selection, court-position assignment, inter-person
// connectivity strategies, pair enumeration for the three relationship
// types, and pairwise feature extraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/skeldata/types.hpp"

namespace girn::pairing {

using data::GroupSample;
using data::JointTrack;
using data::PersonPose;
using data::Team;

// ---------------------------------------------------------------------------
// Joint subsets

enum class JointSubsetKind { J2 = 2, J3 = 3, J4 = 4, J5 = 5, J6 = 6, J7 = 7 };

inline JointSubsetKind joint_subset_from_count(int n) {
  if (n < 2 || n > 7) {
    throw std::invalid_argument("joint subset must have 2..7 joints, got " +
                                std::to_string(n));
  }
  return static_cast<JointSubsetKind>(n);
}

struct JointSubset {
  JointSubsetKind kind;
  std::vector<std::string> members;  // fixed order
};

// J2 = wrists; J3 = J2 + Neck; J4 = J2 + ankles; J5 = J4 + Neck;
// J6 = J5 + MidHip; J7 = J6 + Nose.
inline JointSubset joint_subset(JointSubsetKind kind) {
  JointSubset s;
  s.kind = kind;
  switch (kind) {
    case JointSubsetKind::J2: s.members = {"LWrist", "RWrist"}; break;
    case JointSubsetKind::J3: s.members = {"LWrist", "RWrist", "Neck"}; break;
    case JointSubsetKind::J4: s.members = {"LWrist", "RWrist", "LAnkle", "RAnkle"}; break;
    case JointSubsetKind::J5:
      s.members = {"LWrist", "RWrist", "LAnkle", "RAnkle", "Neck"};
      break;
    case JointSubsetKind::J6:
      s.members = {"LWrist", "RWrist", "LAnkle", "RAnkle", "Neck", "MidHip"};
      break;
    case JointSubsetKind::J7:
      s.members = {"LWrist", "RWrist", "LAnkle", "RAnkle", "Neck", "MidHip", "Nose"};
      break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Court assignment

enum class Row { front, back };
// columns ordered by court y within a row
enum class Column { exterior_a = 0, middle = 1, exterior_b = 2 };

struct CourtSlot {
  Team team = Team::left;
  Row row = Row::front;
  Column column = Column::exterior_a;
  bool filled = false;
  std::size_t person = 0;  // index into the persons list when filled
};

struct CourtAssignment {
  // 12 slots: team-major, then row (front, back), then column.
  std::array<CourtSlot, 12> slots;
  // per person: index of its slot
  std::vector<std::size_t> slot_of;

  static constexpr std::size_t slot_index(Team team, Row row, Column column) {
    return (team == Team::left ? 0 : 6) + (row == Row::front ? 0 : 3) +
           static_cast<std::size_t>(column);
  }
};

namespace detail {

inline double mean_valid_x(const JointTrack& t) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.frames(); ++f) {
    if (t.is_valid(f)) {
      sum += t.x(f);
      ++n;
    }
  }
  if (n == 0) throw std::runtime_error("assign_positions: joint has no valid frames");
  return sum / static_cast<double>(n);
}

inline double mean_valid_y(const JointTrack& t) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.frames(); ++f) {
    if (t.is_valid(f)) {
      sum += t.y(f);
      ++n;
    }
  }
  if (n == 0) throw std::runtime_error("assign_positions: joint has no valid frames");
  return sum / static_cast<double>(n);
}

inline const JointTrack& midhip(const PersonPose& p) {
  auto it = p.joints.find("MidHip");
  if (it == p.joints.end()) {
    throw std::runtime_error("assign_positions: person '" + p.id + "' lacks MidHip");
  }
  return it->second;
}

}  // namespace detail

// Splits each team into front (the three mean-MidHip-x positions nearest the
// inter-team boundary) and back, orders columns by mean y, and leaves
// unfilled slots in the back rows when a team has fewer than six players.
// Purely geometric, so invariant under person-list permutations.
inline CourtAssignment assign_positions(const GroupSample& sample) {
  CourtAssignment out;
  for (Team team : {Team::left, Team::right}) {
    for (Row row : {Row::front, Row::back}) {
      for (Column col : {Column::exterior_a, Column::middle, Column::exterior_b}) {
        CourtSlot& s = out.slots[CourtAssignment::slot_index(team, row, col)];
        s.team = team;
        s.row = row;
        s.column = col;
        s.filled = false;
      }
    }
  }
  out.slot_of.assign(sample.persons.size(), 0);

  struct Entry {
    std::size_t person;
    double x, y;
  };
  std::vector<Entry> left, right;
  for (std::size_t i = 0; i < sample.persons.size(); ++i) {
    const PersonPose& p = sample.persons[i];
    const JointTrack& hip = detail::midhip(p);
    Entry e{i, detail::mean_valid_x(hip), detail::mean_valid_y(hip)};
    (p.team == Team::left ? left : right).push_back(e);
  }
  if (left.size() > 6 || right.size() > 6) {
    throw std::runtime_error("assign_positions: more than 6 persons on a team");
  }

  double boundary = 0.0;
  {
    double lx = 0.0, rx = 0.0;
    for (const Entry& e : left) lx += e.x;
    for (const Entry& e : right) rx += e.x;
    const double lc = left.empty() ? 0.0 : lx / left.size();
    const double rc = right.empty() ? 0.0 : rx / right.size();
    boundary = 0.5 * (lc + rc);
  }

  for (Team team : {Team::left, Team::right}) {
    std::vector<Entry>& members = team == Team::left ? left : right;
    // nearest to the boundary first; ties broken by y then x for determinism
    std::sort(members.begin(), members.end(), [&](const Entry& a, const Entry& b) {
      const double da = std::abs(a.x - boundary);
      const double db = std::abs(b.x - boundary);
      if (da != db) return da < db;
      if (a.y != b.y) return a.y < b.y;
      return a.x < b.x;
    });
    const std::size_t n_front = std::min<std::size_t>(3, members.size());
    std::vector<Entry> front(members.begin(), members.begin() + n_front);
    std::vector<Entry> back(members.begin() + n_front, members.end());
    auto by_y = [](const Entry& a, const Entry& b) {
      if (a.y != b.y) return a.y < b.y;
      return a.x < b.x;
    };
    std::sort(front.begin(), front.end(), by_y);
    std::sort(back.begin(), back.end(), by_y);
    for (std::size_t k = 0; k < front.size(); ++k) {
      CourtSlot& s = out.slots[CourtAssignment::slot_index(team, Row::front,
                                                           static_cast<Column>(k))];
      s.filled = true;
      s.person = front[k].person;
      out.slot_of[front[k].person] = CourtAssignment::slot_index(team, Row::front,
                                                                 static_cast<Column>(k));
    }
    for (std::size_t k = 0; k < back.size(); ++k) {
      CourtSlot& s = out.slots[CourtAssignment::slot_index(team, Row::back,
                                                           static_cast<Column>(k))];
      s.filled = true;
      s.person = back[k].person;
      out.slot_of[back[k].person] = CourtAssignment::slot_index(team, Row::back,
                                                                static_cast<Column>(k));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity strategies

enum class ConnectivityStrategy { full, dense, moderate, sparse };

inline ConnectivityStrategy connectivity_from_name(const std::string& s) {
  if (s == "full") return ConnectivityStrategy::full;
  if (s == "dense") return ConnectivityStrategy::dense;
  if (s == "moderate") return ConnectivityStrategy::moderate;
  if (s == "sparse") return ConnectivityStrategy::sparse;
  throw std::invalid_argument("unknown connectivity '" + s + "'");
}

inline const char* connectivity_name(ConnectivityStrategy c) {
  switch (c) {
    case ConnectivityStrategy::full: return "full";
    case ConnectivityStrategy::dense: return "dense";
    case ConnectivityStrategy::moderate: return "moderate";
    case ConnectivityStrategy::sparse: return "sparse";
  }
  return "?";
}

namespace detail {

inline bool exterior(Column c) { return c != Column::middle; }

inline bool opposite_exteriors(Column a, Column b) {
  return exterior(a) && exterior(b) && a != b;
}

// Undirected slot-level adjacency, independent of fill state.
//   full:     every slot connected to every other slot.
//   dense:    teammates always connected; front rows of opposing teams
//             connected to each other; back slots never cross teams.
//   moderate: dense minus links between opposite exterior columns.
//   sparse:   moderate minus the middle-column diagonals (front middle to
//             opponent front exteriors).
inline bool slots_connected(const CourtSlot& a, const CourtSlot& b,
                            ConnectivityStrategy strategy) {
  if (strategy == ConnectivityStrategy::full) return true;
  const bool teammates = a.team == b.team;
  const bool front_pair = a.row == Row::front && b.row == Row::front;
  bool connected = teammates || front_pair;
  if (!connected) return false;
  if (strategy == ConnectivityStrategy::dense) return true;
  if (opposite_exteriors(a.column, b.column)) return false;
  if (strategy == ConnectivityStrategy::moderate) return true;
  // sparse: cut the front-middle diagonal to opponent front exteriors
  if (!teammates && front_pair) {
    const bool diag = (a.column == Column::middle && exterior(b.column)) ||
                      (b.column == Column::middle && exterior(a.column));
    if (diag) return false;
  }
  return true;
}

}  // namespace detail

// The set of persons connected to person p, ordered by slot index. p must
// occupy a filled slot; unfilled slots never appear.
inline std::vector<std::size_t> connected_set(std::size_t person,
                                              const CourtAssignment& assignment,
                                              ConnectivityStrategy strategy) {
  if (person >= assignment.slot_of.size()) {
    throw std::invalid_argument("connected_set: person index out of range");
  }
  const CourtSlot& mine = assignment.slots[assignment.slot_of[person]];
  if (!mine.filled || mine.person != person) {
    throw std::invalid_argument("connected_set: person does not occupy a filled slot");
  }
  std::vector<std::size_t> out;
  for (const CourtSlot& other : assignment.slots) {
    if (!other.filled || other.person == person) continue;
    if (detail::slots_connected(mine, other, strategy)) out.push_back(other.person);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pair enumeration

struct IntraPair {
  std::size_t i, k;  // indices into the subset member list, i < k
};

inline std::vector<IntraPair> enumerate_intra_pairs(const JointSubset& subset) {
  if (subset.members.empty()) throw std::invalid_argument("enumerate_intra_pairs: empty");
  std::vector<IntraPair> out;
  for (std::size_t i = 0; i < subset.members.size(); ++i) {
    for (std::size_t k = i + 1; k < subset.members.size(); ++k) {
      out.push_back({i, k});
    }
  }
  return out;
}

struct InterPair {
  std::size_t i;      // joint index on person p
  std::size_t k;      // joint index on person q
  std::size_t other;  // person q
};

// Ordered pairs per Eq-style independent double sums: |C_p| * J^2 entries.
inline std::vector<InterPair> enumerate_inter_pairs(const std::vector<std::size_t>& connected,
                                                    const JointSubset& subset) {
  std::vector<InterPair> out;
  out.reserve(connected.size() * subset.members.size() * subset.members.size());
  for (std::size_t q : connected) {
    for (std::size_t i = 0; i < subset.members.size(); ++i) {
      for (std::size_t k = 0; k < subset.members.size(); ++k) {
        out.push_back({i, k, q});
      }
    }
  }
  return out;
}

struct MissingObjectTrack : std::runtime_error {
  MissingObjectTrack() : std::runtime_error("sample has no object track") {}
};

// One pair per subset joint against the object track.
inline std::vector<std::size_t> enumerate_object_pairs(const GroupSample& sample,
                                                       const JointSubset& subset) {
  if (!sample.object) throw MissingObjectTrack();
  std::vector<std::size_t> out(subset.members.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

// ---------------------------------------------------------------------------
// Pair features

inline constexpr std::size_t pair_feature_width(std::size_t frames) {
  return 9 * frames - 4;  // 2T + 2T + T + 2(T-1) + 2(T-1)
}

// [coords_a | coords_b | per-frame distance | motion_a | motion_b]
inline std::vector<double> pair_features(const JointTrack& a, const JointTrack& b) {
  a.validate_shape();
  b.validate_shape();
  const std::size_t T = a.frames();
  if (b.frames() != T) throw std::invalid_argument("pair_features: frame count mismatch");
  if (T < 2) throw std::invalid_argument("pair_features: need at least 2 frames");
  std::vector<double> f;
  f.reserve(pair_feature_width(T));
  f.insert(f.end(), a.coords.begin(), a.coords.end());
  f.insert(f.end(), b.coords.begin(), b.coords.end());
  for (std::size_t t = 0; t < T; ++t) {
    const double dx = a.x(t) - b.x(t);
    const double dy = a.y(t) - b.y(t);
    f.push_back(std::sqrt(dx * dx + dy * dy));
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    f.push_back(a.x(t + 1) - a.x(t));
    f.push_back(a.y(t + 1) - a.y(t));
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    f.push_back(b.x(t + 1) - b.x(t));
    f.push_back(b.y(t + 1) - b.y(t));
  }
  return f;
}

// Looks a subset joint up on a person; missing joints are treated as an
// all-invalid (zero) track of the right length.
inline const JointTrack& subset_track(const PersonPose& p, const std::string& joint,
                                      std::size_t frames) {
  auto it = p.joints.find(joint);
  if (it != p.joints.end()) return it->second;
  static thread_local JointTrack zero;
  if (zero.frames() != frames) {
    zero = JointTrack(frames);
    for (std::size_t t = 0; t < frames; ++t) zero.invalidate(t);
  }
  return zero;
}

// Closed-form pair counts for a 12-slot court, used by budget guards.
inline std::size_t inter_pair_count(const CourtAssignment& assignment,
                                    ConnectivityStrategy strategy, std::size_t joints) {
  std::size_t total = 0;
  for (const CourtSlot& s : assignment.slots) {
    if (!s.filled) continue;
    total += connected_set(s.person, assignment, strategy).size() * joints * joints;
  }
  return total;
}

}  // namespace girn::pairing
