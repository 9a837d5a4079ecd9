#pragma once
// Clip directory IO. Each clip is a directory holding a clip.json document:
//   group_label: one of the 8 composite labels
//   frame_count: 41
//   resolution: [width_px, height_px]
//   persons: [{id, team, action, joints: {name: [[x, y, valid], ...]}}]
//   ball: [[x, y, valid], ...]            (optional)
// Coordinates are raw pixels, top-left origin, before any preprocessing.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "girn/skeldata/types.hpp"

namespace girn::data {

namespace fs = std::filesystem;

namespace detail {

inline JointTrack track_from_json(const nlohmann::json& arr, const std::string& what,
                                  std::size_t expect_frames) {
  if (!arr.is_array() || arr.size() != expect_frames) {
    throw std::runtime_error(what + ": expected " + std::to_string(expect_frames) +
                             " frames, got " + std::to_string(arr.size()));
  }
  JointTrack track(expect_frames);
  for (std::size_t t = 0; t < expect_frames; ++t) {
    const nlohmann::json& fr = arr[t];
    if (!fr.is_array() || fr.size() != 3) {
      throw std::runtime_error(what + ": frame " + std::to_string(t) +
                               " must be [x, y, valid]");
    }
    const bool ok = fr[2].get<int>() != 0;
    track.set(t, fr[0].get<double>(), fr[1].get<double>(), ok);
  }
  return track;
}

inline nlohmann::json track_to_json(const JointTrack& track) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t t = 0; t < track.frames(); ++t) {
    arr.push_back({track.x(t), track.y(t), track.is_valid(t) ? 1 : 0});
  }
  return arr;
}

}  // namespace detail

inline fs::path clip_json_path(const fs::path& path) {
  if (path.extension() == ".json") return path;
  return path / "clip.json";
}

inline GroupSample load_clip(const fs::path& path) {
  const fs::path file = clip_json_path(path);
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_clip: cannot open " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_clip: malformed JSON in " + file.string() + ": " +
                             e.what());
  }

  GroupSample s;
  s.group_label = group_label_index(doc.at("group_label").get<std::string>());
  const std::size_t frames = doc.at("frame_count").get<std::size_t>();
  s.res_width = doc.at("resolution").at(0).get<int>();
  s.res_height = doc.at("resolution").at(1).get<int>();

  for (const nlohmann::json& pj : doc.at("persons")) {
    PersonPose p;
    p.id = pj.at("id").get<std::string>();
    p.team = team_from_name(pj.at("team").get<std::string>());
    if (pj.contains("action") && !pj.at("action").is_null()) {
      p.action = action_index(pj.at("action").get<std::string>());
    }
    for (const auto& [name, arr] : pj.at("joints").items()) {
      if (!is_body25_name(name)) {
        throw std::runtime_error("load_clip: unknown joint name '" + name + "'");
      }
      p.joints[name] = detail::track_from_json(arr, "joint '" + name + "'", frames);
    }
    if (p.joints.empty()) {
      throw std::runtime_error("load_clip: person '" + p.id + "' has no joints");
    }
    s.persons.push_back(std::move(p));
  }
  if (doc.contains("ball") && !doc.at("ball").is_null()) {
    s.object = detail::track_from_json(doc.at("ball"), "ball", frames);
  }
  validate_sample(s);
  return s;
}

inline void save_clip(const fs::path& dir, const GroupSample& s) {
  validate_sample(s);
  nlohmann::json doc;
  doc["group_label"] = group_label_names()[s.group_label];
  doc["frame_count"] = s.frames();
  doc["resolution"] = {s.res_width, s.res_height};
  nlohmann::json persons = nlohmann::json::array();
  for (const PersonPose& p : s.persons) {
    nlohmann::json pj;
    pj["id"] = p.id;
    pj["team"] = team_name(p.team);
    if (p.action) {
      pj["action"] = action_names()[*p.action];
    } else {
      pj["action"] = nullptr;
    }
    nlohmann::json joints;
    for (const auto& [name, track] : p.joints) joints[name] = detail::track_to_json(track);
    pj["joints"] = std::move(joints);
    persons.push_back(std::move(pj));
  }
  doc["persons"] = std::move(persons);
  if (s.object) doc["ball"] = detail::track_to_json(*s.object);

  fs::create_directories(dir);
  const fs::path file = dir / "clip.json";
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("save_clip: cannot open " + file.string());
  out << doc.dump() << "\n";
}

// Clips of a split, ordered by directory name.
inline std::vector<GroupSample> load_split(const fs::path& split_dir) {
  if (!fs::is_directory(split_dir)) {
    throw std::runtime_error("load_split: not a directory: " + split_dir.string());
  }
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(split_dir)) {
    if (e.is_directory() && fs::exists(e.path() / "clip.json")) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<GroupSample> out;
  out.reserve(dirs.size());
  for (const fs::path& d : dirs) out.push_back(load_clip(d));
  return out;
}

// FNV-1a over all clip.json bytes in sorted path order.
inline std::string dataset_digest(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() == "clip.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 0x100000001b3ULL;
    }
  };
  for (const fs::path& f : files) {
    const std::string rel = fs::relative(f, root).generic_string();
    feed(rel.data(), rel.size());
    std::ifstream in(f, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    feed(bytes.data(), bytes.size());
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace girn::data
