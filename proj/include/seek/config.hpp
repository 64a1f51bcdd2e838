#pragma once

#include <cstdint>
#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "seek/dqn.hpp"
#include "seek/env.hpp"
#include "seek/scene.hpp"

namespace seek {

struct EvalConfig {
  std::size_t n_episodes = 200;
  std::uint64_t base_seed = 100'000;
  std::vector<std::string> policies{"dqn", "fsm", "random"};
  std::vector<int> obstacle_counts{0, 3};
  unsigned workers = 1;
  double fsm_front_threshold = 0.6;
};

struct IoConfig {
  std::string output_dir = "out";
  int verbosity = 1;
};

/// Whole-run settings. Sections: env, source, train, eval, io.
struct RunConfig {
  EpisodeConfig env;
  TrainConfig train;
  EvalConfig eval;
  IoConfig io;
  std::optional<std::string> scene_path;
};

namespace detail {

class SectionReader {
 public:
  SectionReader(const YAML::Node& node, std::string section, std::string origin)
      : node_(node), section_(std::move(section)), origin_(std::move(origin)) {
    if (node_ && !node_.IsMap()) throw ConfigError(origin_, yaml_line(node_), section_, "section must be a mapping");
  }

  template <class T>
  void read(const char* key, T& out, const std::function<bool(const T&)>& valid = {},
            const char* requirement = "") {
    if (!node_) return;
    known_.push_back(key);
    const YAML::Node v = node_[key];
    if (!v) return;
    T parsed;
    try {
      parsed = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(origin_, yaml_line(v), name(key), "wrong value type");
    }
    if (valid && !valid(parsed)) throw ConfigError(origin_, yaml_line(v), name(key), std::string("must be ") + requirement);
    out = parsed;
  }

  template <class E>
  void read_enum(const char* key, E& out, std::initializer_list<std::pair<const char*, E>> choices) {
    std::string s;
    read<std::string>(key, s);
    if (s.empty()) return;
    for (const auto& [label, value] : choices)
      if (s == label) {
        out = value;
        return;
      }
    std::string allowed;
    for (const auto& c : choices) allowed += std::string(allowed.empty() ? "" : " | ") + c.first;
    throw ConfigError(origin_, yaml_line(node_[key]), name(key), "must be one of " + allowed);
  }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (std::find(known_.begin(), known_.end(), k) == known_.end())
        throw ConfigError(origin_, yaml_line(kv.first), name(k.c_str()), "unknown key");
    }
  }

 private:
  std::string name(const char* key) const { return section_ + "." + key; }

  YAML::Node node_;
  std::string section_;
  std::string origin_;
  std::vector<std::string> known_;
};

template <class T>
std::function<bool(const T&)> positive() {
  return [](const T& v) { return v > T(0); };
}
template <class T>
std::function<bool(const T&)> non_negative() {
  return [](const T& v) { return v >= T(0); };
}
inline std::function<bool(const double&)> unit_interval() {
  return [](const double& v) { return v >= 0.0 && v <= 1.0; };
}

}  // namespace detail

/// Parses a config document. Every key is optional; missing keys keep their
/// defaults. Unknown keys and out-of-range values are errors naming the key.
inline RunConfig parse_config(const YAML::Node& root, const std::string& origin = "config") {
  using detail::non_negative;
  using detail::positive;
  using detail::SectionReader;
  RunConfig cfg;
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError(origin, yaml_line(root), "", "config must be a mapping");
  for (const auto& kv : root) {
    const auto k = kv.first.as<std::string>();
    if (k != "env" && k != "source" && k != "train" && k != "eval" && k != "io")
      throw ConfigError(origin, yaml_line(kv.first), k, "unknown section");
  }

  auto& e = cfg.env;
  SectionReader env(root["env"], "env", origin);
  env.read("arena_width", e.arena_width, positive<double>(), "> 0");
  env.read("arena_height", e.arena_height, positive<double>(), "> 0");
  env.read("dt", e.dt, positive<double>(), "> 0");
  env.read("sensor_substeps", e.sensor_substeps, positive<int>(), ">= 1");
  env.read("success_radius", e.success_radius, positive<double>(), "> 0");
  env.read("max_steps", e.max_steps, positive<int>(), ">= 1");
  env.read("forward_speed", e.forward_speed, non_negative<double>(), ">= 0");
  env.read("yaw_rate_deg", e.yaw_rate_deg, non_negative<double>(), ">= 0");
  env.read("turn_forward_speed", e.turn_forward_speed, non_negative<double>(), ">= 0");
  env.read("robot_radius", e.robot_radius, positive<double>(), "> 0");
  env.read("laser_max_range", e.laser_max_range, positive<double>(), "> 0");
  env.read("normalize_lasers", e.normalize_lasers);
  env.read<double>("filter_alpha", e.filter_alpha, [](const double& a) { return a >= 0.0 && a < 1.0; }, "in [0, 1)");
  env.read("ablation", e.ablation_raw_gradient);
  env.read("source_wall_margin", e.source_wall_margin, non_negative<double>(), ">= 0");
  env.read("min_source_distance", e.min_source_distance, non_negative<double>(), ">= 0");
  env.read("obstacle_spawn_clearance", e.obstacle_spawn_clearance, non_negative<double>(), ">= 0");
  env.read("obstacle_source_clearance", e.obstacle_source_clearance, non_negative<double>(), ">= 0");
  env.read("obstacle_half_min", e.obstacle_half_min, positive<double>(), "> 0");
  env.read("obstacle_half_max", e.obstacle_half_max, positive<double>(), "> 0");
  env.read("placement_retry_cap", e.placement_retry_cap, positive<int>(), ">= 1");
  std::string scene;
  env.read("scene", scene);
  if (!scene.empty()) cfg.scene_path = scene;
  env.finish();
  if (e.obstacle_half_max < e.obstacle_half_min)
    throw ConfigError(origin, yaml_line(root["env"]["obstacle_half_max"]), "env.obstacle_half_max",
                      "must be >= env.obstacle_half_min");

  auto& s = e.source;
  SectionReader src(root["source"], "source", origin);
  src.read("a", s.a, positive<double>(), "> 0");
  src.read("b", s.b);
  src.read<double>("c", s.c, [](const double& c) { return c != 0.0; }, "nonzero");
  src.read("noise_sigma", s.noise_sigma, non_negative<double>(), ">= 0");
  src.read("normalizer", s.normalizer, positive<double>(), "> 0");
  src.finish();

  auto& t = cfg.train;
  SectionReader tr(root["train"], "train", origin);
  tr.read<double>("gamma", t.gamma, [](const double& g) { return g > 0.0 && g < 1.0; }, "in (0, 1)");
  tr.read("learning_rate", t.learning_rate, positive<double>(), "> 0");
  tr.read("batch_size", t.batch_size, positive<std::size_t>(), ">= 1");
  tr.read("buffer_capacity", t.buffer_capacity, positive<std::size_t>(), ">= 1");
  tr.read("epsilon_start", t.epsilon_start, detail::unit_interval(), "in [0, 1]");
  tr.read("epsilon_end", t.epsilon_end, detail::unit_interval(), "in [0, 1]");
  tr.read("epsilon_decay_steps", t.epsilon_decay_steps);
  tr.read("target_sync_steps", t.target_sync_steps, positive<std::uint64_t>(), ">= 1");
  tr.read("total_steps", t.total_steps);
  tr.read("seed", t.seed);
  tr.read_enum("loss", t.loss, {{"huber", Loss::Huber}, {"mse", Loss::Mse}});
  tr.read_enum("activation", t.activation, {{"relu", Activation::Relu}, {"tanh", Activation::Tanh}});
  tr.read("reward_scale", t.reward_scale, positive<double>(), "> 0");
  tr.read("eval_every_episodes", t.eval_every_episodes);
  tr.read("eval_episodes", t.eval_episodes, positive<std::size_t>(), ">= 1");
  tr.read("eval_seed_base", t.eval_seed_base);
  tr.read<std::vector<int>>("obstacle_counts", t.obstacle_counts, [](const std::vector<int>& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](int c) { return c >= 0; });
  }, "a non-empty list of counts >= 0");
  tr.finish();
  if (t.buffer_capacity < t.batch_size)
    throw ConfigError(origin, yaml_line(root["train"]), "train.buffer_capacity", "must be >= train.batch_size");

  auto& v = cfg.eval;
  SectionReader ev(root["eval"], "eval", origin);
  ev.read("n_episodes", v.n_episodes, positive<std::size_t>(), ">= 1");
  ev.read("base_seed", v.base_seed);
  ev.read<std::vector<std::string>>("policies", v.policies, [](const std::vector<std::string>& p) {
    return !p.empty() && std::all_of(p.begin(), p.end(), [](const std::string& n) {
      return n == "dqn" || n == "fsm" || n == "random";
    });
  }, "a non-empty list of dqn | fsm | random");
  ev.read<std::vector<int>>("obstacle_counts", v.obstacle_counts, [](const std::vector<int>& c) {
    return !c.empty() && std::all_of(c.begin(), c.end(), [](int n) { return n >= 0; });
  }, "a non-empty list of counts >= 0");
  ev.read("workers", v.workers, positive<unsigned>(), ">= 1");
  ev.read("fsm_front_threshold", v.fsm_front_threshold, positive<double>(), "> 0");
  ev.finish();

  SectionReader io(root["io"], "io", origin);
  io.read("output_dir", cfg.io.output_dir);
  io.read("verbosity", cfg.io.verbosity);
  io.finish();
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text, const std::string& origin = "config") {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, "", e.msg);
  }
  return parse_config(root, origin);
}

/// Loads a config file; a referenced scene file is resolved relative to it.
inline RunConfig load_config(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw std::runtime_error("cannot open: " + path.string());
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path.string(), e.mark.line + 1, "", e.msg);
  }
  RunConfig cfg = parse_config(root, path.string());
  if (cfg.scene_path) {
    std::filesystem::path scene = *cfg.scene_path;
    if (scene.is_relative()) scene = path.parent_path() / scene;
    const auto sc = load_scene(scene).scenario();
    if (!sc) throw ConfigError(path.string(), 0, "env.scene", "scene file must define start and source");
    cfg.env.scenario = sc;
    cfg.env.arena_width = sc->arena.width;
    cfg.env.arena_height = sc->arena.height;
  }
  return cfg;
}

}  // namespace seek
