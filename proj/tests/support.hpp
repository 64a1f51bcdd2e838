#pragma once

#include "seek/env.hpp"

namespace seek::testing {

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(Action a) : a_(a) {}
  Action act(const Observation&) override { return a_; }

 private:
  Action a_;
};

inline EpisodeConfig fixed_world(Pose start, Vec2 source, double w = 10.0, double h = 10.0) {
  EpisodeConfig cfg;
  cfg.arena_width = w;
  cfg.arena_height = h;
  cfg.scenario = Scenario{Arena{w, h, {}}, start, source};
  return cfg;
}

}  // namespace seek::testing
