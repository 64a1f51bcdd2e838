#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "seek/env.hpp"
#include "seek/rng.hpp"

namespace seek {

/// Bounce-and-rotate explorer. Light-blind: reads only the front laser.
struct FsmParams {
  double front_threshold = 0.6;  // meters
  double min_turn_deg = 90.0;
  double max_turn_deg = 270.0;
  double turn_deg_per_step = 5.4;  // yaw rate * dt
  double laser_scale = kLaserMaxRange;  // observation units -> meters
};

struct FsmState {
  enum class Mode : std::uint8_t { Cruise, Turn };
  Mode mode = Mode::Cruise;
  Action turn_direction = Action::Left;
  int turn_steps_remaining = 0;
};

/// One FSM decision. Entering Turn emits the first rotation immediately.
inline Action fsm_act(FsmState& state, const FsmParams& p, const Observation& obs, Rng& rng) {
  if (state.mode == FsmState::Mode::Cruise) {
    const double front_m = obs[0] * p.laser_scale;
    if (front_m > p.front_threshold) return Action::Forward;
    state.mode = FsmState::Mode::Turn;
    state.turn_direction = rng.bernoulli(0.5) ? Action::Left : Action::Right;
    const double angle = rng.uniform(p.min_turn_deg, p.max_turn_deg);
    state.turn_steps_remaining = std::max(1, static_cast<int>(std::lround(angle / p.turn_deg_per_step)));
  }
  const Action a = state.turn_direction;
  if (--state.turn_steps_remaining == 0) state.mode = FsmState::Mode::Cruise;
  return a;
}

class FsmPolicy final : public Policy {
 public:
  explicit FsmPolicy(FsmParams params = {}) : params_(params) {}

  /// Derives turn rate and laser scale from the episode settings.
  static FsmPolicy for_episode(const EpisodeConfig& cfg, double front_threshold = 0.6) {
    FsmParams p;
    p.front_threshold = front_threshold;
    p.turn_deg_per_step = cfg.yaw_rate_deg * cfg.dt;
    p.laser_scale = cfg.normalize_lasers ? cfg.laser_max_range : 1.0;
    return FsmPolicy(p);
  }

  void begin_episode(std::uint64_t seed) override {
    rng_ = Rng(seed);
    state_ = {};
  }
  Action act(const Observation& obs) override { return fsm_act(state_, params_, obs, rng_); }

  const FsmState& state() const { return state_; }
  const FsmParams& params() const { return params_; }

 private:
  FsmParams params_;
  FsmState state_;
  Rng rng_;
};

inline Action random_act(Rng& rng) { return static_cast<Action>(rng.index(kNumActions)); }

class RandomPolicy final : public Policy {
 public:
  void begin_episode(std::uint64_t seed) override { rng_ = Rng(seed); }
  Action act(const Observation&) override { return random_act(rng_); }

 private:
  Rng rng_;
};

}  // namespace seek
