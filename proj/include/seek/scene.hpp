#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "seek/env.hpp"
#include "seek/geometry.hpp"

namespace seek {

/// Parse or validation failure in a structured-text input, with the
/// 1-based line and the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, int line, const std::string& key, const std::string& what)
      : std::runtime_error(format(origin, line, key, what)), line_(line), key_(key) {}

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  static std::string format(const std::string& origin, int line, const std::string& key,
                            const std::string& what) {
    std::string s = origin;
    if (line > 0) s += fmt::format(":{}", line);
    if (!key.empty()) s += fmt::format(": {}", key);
    return s + ": " + what;
  }
  int line_;
  std::string key_;
};

inline int yaml_line(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

// Scene file layout:
//
//   arena:
//     width: 5.0
//     height: 5.0
//     obstacles:
//       - center: [3.5, 2.5]
//         half_extents: [0.25, 0.25]
//   start: {x: 2.5, y: 2.5, heading: 0.0}   # optional
//   source: [4.0, 2.5]                       # optional
struct SceneFile {
  Arena arena;
  std::optional<Pose> start;
  std::optional<Vec2> source;

  std::optional<Scenario> scenario() const {
    if (!start || !source) return std::nullopt;
    return Scenario{arena, *start, *source};
  }
};

namespace detail {

inline Vec2 parse_vec2(const YAML::Node& n, const std::string& origin, const std::string& key) {
  if (!n.IsSequence() || n.size() != 2)
    throw ConfigError(origin, yaml_line(n), key, "expected a two-element list [x, y]");
  try {
    return {n[0].as<double>(), n[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw ConfigError(origin, yaml_line(n), key, "expected numbers");
  }
}

inline double parse_double(const YAML::Node& n, const std::string& origin, const std::string& key) {
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(origin, yaml_line(n), key, "expected a number");
  }
}

inline void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> known,
                           const std::string& origin, const std::string& prefix) {
  for (const auto& kv : map) {
    const auto k = kv.first.as<std::string>();
    bool ok = false;
    for (auto name : known) ok = ok || k == name;
    if (!ok) throw ConfigError(origin, yaml_line(kv.first), prefix + k, "unknown key");
  }
}

}  // namespace detail

inline SceneFile parse_scene(const YAML::Node& root, const std::string& origin = "scene") {
  using detail::parse_double;
  using detail::parse_vec2;
  if (!root.IsMap()) throw ConfigError(origin, yaml_line(root), "", "scene must be a mapping");
  detail::reject_unknown(root, {"arena", "start", "source"}, origin, "");
  SceneFile scene;
  const auto arena = root["arena"];
  if (!arena || !arena.IsMap()) throw ConfigError(origin, 0, "arena", "missing arena section");
  detail::reject_unknown(arena, {"width", "height", "obstacles"}, origin, "arena.");
  if (!arena["width"] || !arena["height"]) throw ConfigError(origin, yaml_line(arena), "arena", "width and height required");
  scene.arena.width = parse_double(arena["width"], origin, "arena.width");
  scene.arena.height = parse_double(arena["height"], origin, "arena.height");
  if (!(scene.arena.width > 0.0 && scene.arena.height > 0.0))
    throw ConfigError(origin, yaml_line(arena["width"]), "arena.width", "arena size must be > 0");

  if (const auto obs = arena["obstacles"]) {
    if (!obs.IsSequence()) throw ConfigError(origin, yaml_line(obs), "arena.obstacles", "expected a list");
    for (const auto& o : obs) {
      detail::reject_unknown(o, {"center", "half_extents"}, origin, "arena.obstacles[].");
      Obstacle box{parse_vec2(o["center"], origin, "arena.obstacles[].center"),
                   parse_vec2(o["half_extents"], origin, "arena.obstacles[].half_extents")};
      if (!(box.half_extents.x > 0.0 && box.half_extents.y > 0.0))
        throw ConfigError(origin, yaml_line(o), "arena.obstacles[].half_extents", "must be > 0");
      if (box.min_x() < 0.0 || box.min_y() < 0.0 || box.max_x() > scene.arena.width ||
          box.max_y() > scene.arena.height)
        throw ConfigError(origin, yaml_line(o), "arena.obstacles[]", "obstacle must lie inside the arena");
      scene.arena.obstacles.push_back(box);
    }
  }
  if (const auto s = root["start"]) {
    detail::reject_unknown(s, {"x", "y", "heading"}, origin, "start.");
    Pose p;
    p.position = {parse_double(s["x"], origin, "start.x"), parse_double(s["y"], origin, "start.y")};
    p.heading = s["heading"] ? normalize_angle(parse_double(s["heading"], origin, "start.heading")) : 0.0;
    if (!scene.arena.contains(p.position)) throw ConfigError(origin, yaml_line(s), "start", "outside arena");
    scene.start = p;
  }
  if (const auto s = root["source"]) {
    scene.source = parse_vec2(s, origin, "source");
    if (!scene.arena.contains(*scene.source)) throw ConfigError(origin, yaml_line(s), "source", "outside arena");
  }
  return scene;
}

inline SceneFile load_scene(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw std::runtime_error("cannot open: " + path.string());
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path.string(), e.mark.line + 1, "", e.msg);
  }
  return parse_scene(root, path.string());
}

inline std::string scene_yaml(const Arena& arena, const std::optional<Pose>& start,
                              const std::optional<Vec2>& source) {
  std::string out = fmt::format("arena:\n  width: {}\n  height: {}\n", arena.width, arena.height);
  if (arena.obstacles.empty()) {
    out += "  obstacles: []\n";
  } else {
    out += "  obstacles:\n";
    for (const auto& o : arena.obstacles)
      out += fmt::format("    - center: [{}, {}]\n      half_extents: [{}, {}]\n", o.center.x, o.center.y,
                         o.half_extents.x, o.half_extents.y);
  }
  if (start)
    out += fmt::format("start: {{x: {}, y: {}, heading: {}}}\n", start->position.x, start->position.y,
                       start->heading);
  if (source) out += fmt::format("source: [{}, {}]\n", source->x, source->y);
  return out;
}

inline std::string scene_yaml(const Scenario& sc) { return scene_yaml(sc.arena, sc.start, sc.source); }

}  // namespace seek
