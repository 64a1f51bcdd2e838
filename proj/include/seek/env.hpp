#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "seek/features.hpp"
#include "seek/geometry.hpp"
#include "seek/rng.hpp"
#include "seek/source_model.hpp"

namespace seek {

enum class Action : std::uint8_t { Forward = 0, Left = 1, Right = 2 };
inline constexpr int kNumActions = 3;

constexpr std::string_view action_name(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

inline constexpr int kObservationSize = 6;

/// Network input (l1, l2, l3, l4, s1, s2): front/right/back/left ranges,
/// then the two source features.
struct Observation {
  std::array<double, kObservationSize> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  friend bool operator==(const Observation&, const Observation&) = default;
};

enum class Outcome : std::uint8_t { Running, Success, Collision, Timeout };

constexpr std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Running: return "running";
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

/// A fully specified world, bypassing random generation.
struct Scenario {
  Arena arena;
  Pose start;
  Vec2 source;
};

/// Everything needed to generate and run one episode.
struct EpisodeConfig {
  double arena_width = 10.0;
  double arena_height = 10.0;
  int obstacle_count = 0;
  std::uint64_t seed = 0;

  double success_radius = 1.0;
  int max_steps = 300;
  double dt = 0.5;               // decision period, seconds
  int sensor_substeps = 5;       // light readings (and motion substeps) per decision
  double forward_speed = 0.5;       // m/s
  double yaw_rate_deg = 54.0;       // deg/s, magnitude for left/right
  double turn_forward_speed = 0.0;  // m/s carried while turning
  double robot_radius = 0.1;
  double laser_max_range = kLaserMaxRange;
  bool normalize_lasers = true;

  SourceParams source;
  double filter_alpha = FeatureFilter::kDefaultAlpha;
  bool ablation_raw_gradient = false;

  // Spawn rules.
  double source_wall_margin = 0.5;
  double min_source_distance = 1.5;
  double obstacle_spawn_clearance = 0.8;
  double obstacle_source_clearance = 0.5;
  double obstacle_half_min = 0.15;
  double obstacle_half_max = 0.4;
  int placement_retry_cap = 1000;

  std::optional<Scenario> scenario;

  void validate() const {
    if (!(arena_width > 0.0 && arena_height > 0.0)) throw std::invalid_argument("arena size must be > 0");
    if (obstacle_count < 0) throw std::invalid_argument("obstacle_count must be >= 0");
    if (!(success_radius > 0.0)) throw std::invalid_argument("success_radius must be > 0");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (sensor_substeps < 1) throw std::invalid_argument("sensor_substeps must be >= 1");
    if (!(robot_radius > 0.0)) throw std::invalid_argument("robot_radius must be > 0");
    if (!(laser_max_range > 0.0)) throw std::invalid_argument("laser_max_range must be > 0");
    if (!(obstacle_half_min > 0.0 && obstacle_half_max >= obstacle_half_min))
      throw std::invalid_argument("obstacle half extents must satisfy 0 < min <= max");
    if (placement_retry_cap < 1) throw std::invalid_argument("placement_retry_cap must be >= 1");
    if (!(filter_alpha >= 0.0 && filter_alpha < 1.0)) throw std::invalid_argument("filter alpha must be in [0,1)");
    source.validate();
  }
};

/// Thrown when random placement exceeds its retry cap.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepInfo {
  Pose pose;
  double distance = 0.0;  // to source, after the step
  double delta_distance = 0.0;
  double c = 0.0;
  double c_f = 0.0;
  SourceFeatures features;
  LaserScan scan;
  bool alpha = false;
  bool beta = false;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  Outcome outcome = Outcome::Running;
  StepInfo info;
};

/// Per-step reward: 1000 alpha - 100 beta - 20 dD - 1.
constexpr double step_reward(bool alpha, bool beta, double delta_distance) {
  return 1000.0 * (alpha ? 1.0 : 0.0) - 100.0 * (beta ? 1.0 : 0.0) - 20.0 * delta_distance - 1.0;
}

/// Generates a random world: heading, source, then obstacles, all from the
/// world stream of the episode seed.
inline Scenario generate_scenario(const EpisodeConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, Stream::World));
  Scenario sc;
  sc.arena.width = cfg.arena_width;
  sc.arena.height = cfg.arena_height;
  sc.start.position = sc.arena.center();
  sc.start.heading = normalize_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));

  const double m = cfg.source_wall_margin;
  if (2.0 * m >= cfg.arena_width || 2.0 * m >= cfg.arena_height)
    throw GenerationError("source wall margin leaves no room");
  bool placed = false;
  for (int attempt = 0; attempt < cfg.placement_retry_cap && !placed; ++attempt) {
    sc.source = {rng.uniform(m, cfg.arena_width - m), rng.uniform(m, cfg.arena_height - m)};
    placed = distance(sc.source, sc.start.position) >= cfg.min_source_distance;
  }
  if (!placed) throw GenerationError("source placement exceeded retry cap");

  for (int k = 0; k < cfg.obstacle_count; ++k) {
    placed = false;
    for (int attempt = 0; attempt < cfg.placement_retry_cap && !placed; ++attempt) {
      Obstacle box;
      box.half_extents = {rng.uniform(cfg.obstacle_half_min, cfg.obstacle_half_max),
                          rng.uniform(cfg.obstacle_half_min, cfg.obstacle_half_max)};
      box.center = {rng.uniform(box.half_extents.x, cfg.arena_width - box.half_extents.x),
                    rng.uniform(box.half_extents.y, cfg.arena_height - box.half_extents.y)};
      if (distance_to_box(sc.start.position, box) < cfg.obstacle_spawn_clearance) continue;
      if (distance_to_box(sc.source, box) < cfg.obstacle_source_clearance) continue;
      bool clear = true;
      for (const auto& other : sc.arena.obstacles) clear = clear && !box.overlaps(other);
      if (!clear) continue;
      sc.arena.obstacles.push_back(box);
      placed = true;
    }
    if (!placed) throw GenerationError("obstacle placement exceeded retry cap (arena too crowded)");
  }
  return sc;
}

/// Source-seeking episode engine.
class Env {
 public:
  Observation reset(const EpisodeConfig& cfg) {
    cfg.validate();
    cfg_ = cfg;
    world_ = cfg.scenario ? *cfg.scenario : generate_scenario(cfg);
    if (!world_.arena.contains(world_.start.position))
      throw std::invalid_argument("start position outside arena");
    world_.start.heading = normalize_angle(world_.start.heading);
    pose_ = world_.start;
    noise_ = Rng(derive_seed(cfg.seed, Stream::Noise));
    filter_ = FeatureFilter(cfg.filter_alpha, FeatureFilter::kDefaultEpsilon, cfg.ablation_raw_gradient);
    steps_ = 0;
    done_ = false;
    active_ = true;
    distance_ = distance(pose_.position, world_.source);
    initial_distance_ = distance_;

    last_c_ = normalize(cfg_.source, sample(cfg_.source, distance_, noise_));
    last_features_ = filter_.reset(last_c_);
    last_scan_ = scan();
    return observe(last_scan_, last_features_);
  }

  StepResult step(Action action) {
    if (!active_) throw std::logic_error("Env::step before reset");
    if (done_) throw std::logic_error("Env::step after episode end");

    const double yaw = cfg_.yaw_rate_deg * std::numbers::pi / 180.0;
    double speed = cfg_.forward_speed;
    double yaw_rate = 0.0;
    if (action == Action::Left) {
      speed = cfg_.turn_forward_speed;
      yaw_rate = yaw;
    } else if (action == Action::Right) {
      speed = cfg_.turn_forward_speed;
      yaw_rate = -yaw;
    }

    const double before = distance_;
    const Pose origin = pose_;
    bool crashed = false;
    for (int k = 1; k <= cfg_.sensor_substeps && !crashed; ++k) {
      // Substep poses are taken from the decision start so that a full
      // decision moves exactly forward_speed * dt.
      pose_ = step_kinematics(origin, speed, yaw_rate, cfg_.dt * k / cfg_.sensor_substeps);
      distance_ = distance(pose_.position, world_.source);
      last_c_ = normalize(cfg_.source, sample(cfg_.source, distance_, noise_));
      last_features_ = filter_.update(last_c_);
      crashed = collision(pose_, world_.arena, cfg_.robot_radius);
    }
    ++steps_;

    StepResult r;
    r.info.pose = pose_;
    r.info.distance = distance_;
    r.info.delta_distance = distance_ - before;
    last_scan_ = scan();
    r.info.c = last_c_;
    r.info.c_f = filter_.level();
    r.info.features = last_features_;
    r.info.scan = last_scan_;

    const bool success = distance_ <= cfg_.success_radius;
    crashed = crashed && !success;
    const bool timeout = !success && !crashed && steps_ >= cfg_.max_steps;
    r.info.alpha = success;
    r.info.beta = crashed || timeout;
    r.reward = step_reward(r.info.alpha, r.info.beta, r.info.delta_distance);
    r.outcome = success ? Outcome::Success
                : crashed ? Outcome::Collision
                : timeout ? Outcome::Timeout
                          : Outcome::Running;
    r.done = r.outcome != Outcome::Running;
    done_ = r.done;
    r.observation = observe(last_scan_, last_features_);
    return r;
  }

  const EpisodeConfig& config() const { return cfg_; }
  const Scenario& world() const { return world_; }
  const Pose& pose() const { return pose_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }
  double distance_to_source() const { return distance_; }
  double initial_distance() const { return initial_distance_; }
  double last_c() const { return last_c_; }
  double filter_level() const { return filter_.level(); }
  const SourceFeatures& last_features() const { return last_features_; }
  const LaserScan& last_scan() const { return last_scan_; }

 private:
  LaserScan scan() const {
    // A crashed pose can sit on or inside a face; the episode ends there.
    if (!world_.arena.contains(pose_.position)) return {};
    return laser_scan(pose_, world_.arena, cfg_.laser_max_range);
  }

  Observation observe(const LaserScan& s, const SourceFeatures& f) const {
    const double k = cfg_.normalize_lasers ? 1.0 / cfg_.laser_max_range : 1.0;
    return {{s.front * k, s.right * k, s.back * k, s.left * k, f.s1, f.s2}};
  }

  EpisodeConfig cfg_;
  Scenario world_;
  Pose pose_;
  Rng noise_;
  FeatureFilter filter_;
  int steps_ = 0;
  bool done_ = false;
  bool active_ = false;
  double distance_ = 0.0;
  double initial_distance_ = 0.0;
  double last_c_ = 0.0;
  SourceFeatures last_features_;
  LaserScan last_scan_;
};

/// Decision rule interface. begin_episode receives the policy-stream seed.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual Action act(const Observation& obs) = 0;
};

/// One logged step. Row 0 is the reset state (no action, zero reward).
struct TrajectoryRow {
  int step = 0;
  Pose pose;
  std::optional<Action> action;
  double reward = 0.0;
  double c = 0.0;
  double c_f = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  LaserScan scan;
  double distance = 0.0;
  bool alpha = false;
  bool beta = false;
  double delta_distance = 0.0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  int obstacle_count = 0;
  Outcome outcome = Outcome::Running;
  bool success = false;
  int steps = 0;
  double path_length = 0.0;    // traveled distance
  double shortest_path = 0.0;  // straight line start -> source
  double final_distance = 0.0;
  double total_return = 0.0;
  std::vector<TrajectoryRow> trajectory;  // filled when logging is on
  std::optional<Scenario> world;          // filled when logging is on
};

/// Runs one episode to termination.
inline RunRecord run_episode(Policy& policy, const EpisodeConfig& cfg, bool log_trajectory = false) {
  Env env;
  Observation obs = env.reset(cfg);
  policy.begin_episode(derive_seed(cfg.seed, Stream::Policy));

  RunRecord rec;
  rec.seed = cfg.seed;
  rec.obstacle_count = static_cast<int>(env.world().arena.obstacles.size());
  rec.shortest_path = env.initial_distance();
  if (log_trajectory) {
    rec.world = env.world();
    TrajectoryRow row;
    row.pose = env.pose();
    row.c = env.last_c();
    row.c_f = env.filter_level();
    row.s1 = env.last_features().s1;
    row.s2 = env.last_features().s2;
    row.scan = env.last_scan();
    row.distance = env.distance_to_source();
    rec.trajectory.push_back(row);
  }

  Vec2 prev = env.pose().position;
  while (!env.done()) {
    const Action a = policy.act(obs);
    StepResult r = env.step(a);
    rec.path_length += distance(prev, r.info.pose.position);
    prev = r.info.pose.position;
    rec.total_return += r.reward;
    obs = r.observation;
    if (log_trajectory) {
      TrajectoryRow row;
      row.step = env.steps();
      row.pose = r.info.pose;
      row.action = a;
      row.reward = r.reward;
      row.c = r.info.c;
      row.c_f = r.info.c_f;
      row.s1 = r.info.features.s1;
      row.s2 = r.info.features.s2;
      row.scan = r.info.scan;
      row.distance = r.info.distance;
      row.alpha = r.info.alpha;
      row.beta = r.info.beta;
      row.delta_distance = r.info.delta_distance;
      rec.trajectory.push_back(row);
    }
    if (r.done) rec.outcome = r.outcome;
  }
  rec.steps = env.steps();
  rec.success = rec.outcome == Outcome::Success;
  rec.final_distance = env.distance_to_source();
  return rec;
}

}  // namespace seek
