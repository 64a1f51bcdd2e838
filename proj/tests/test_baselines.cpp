#include <array>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "seek/baselines.hpp"
#include "support.hpp"

using namespace seek;

namespace {

Observation front_reading(double meters) {
  Observation obs;
  obs[0] = meters / kLaserMaxRange;
  return obs;
}

TEST(Fsm, CruisesOnClearPath) {
  FsmState s;
  Rng rng(1);
  EXPECT_EQ(fsm_act(s, FsmParams{}, front_reading(4.0), rng), Action::Forward);
  EXPECT_EQ(s.mode, FsmState::Mode::Cruise);
}

TEST(Fsm, TurnsWhenBlocked) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FsmState s;
    Rng rng(seed);
    const Action a = fsm_act(s, FsmParams{}, front_reading(0.4), rng);
    EXPECT_TRUE(a == Action::Left || a == Action::Right);
    EXPECT_EQ(a, s.turn_direction);
    // 90 to 270 degrees at 5.4 degrees per step, one step already emitted.
    EXPECT_GE(s.turn_steps_remaining, 17 - 1);
    EXPECT_LE(s.turn_steps_remaining, 50 - 1);
  }
}

TEST(Fsm, TurnCountsDown) {
  FsmState s;
  s.mode = FsmState::Mode::Turn;
  s.turn_direction = Action::Right;
  s.turn_steps_remaining = 3;
  Rng rng(1);
  EXPECT_EQ(fsm_act(s, FsmParams{}, front_reading(4.0), rng), Action::Right);
  EXPECT_EQ(s.turn_steps_remaining, 2);
  fsm_act(s, FsmParams{}, front_reading(0.1), rng);
  EXPECT_EQ(fsm_act(s, FsmParams{}, front_reading(0.1), rng), Action::Right);
  EXPECT_EQ(s.mode, FsmState::Mode::Cruise);
  EXPECT_EQ(fsm_act(s, FsmParams{}, front_reading(4.0), rng), Action::Forward);
}

TEST(Fsm, TurnDirectionsBalanced) {
  std::array<int, 3> counts{};
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    FsmState s;
    Rng rng(seed);
    ++counts[static_cast<int>(fsm_act(s, FsmParams{}, front_reading(0.2), rng))];
  }
  EXPECT_EQ(counts[0], 0);
  EXPECT_NEAR(counts[1] / 2000.0, 0.5, 0.05);
}

TEST(Fsm, HeadOnApproachStopsBeforeWall) {
  for (double start_x = 1.0; start_x < 9.0; start_x += 0.37) {
    auto cfg = seek::testing::fixed_world({{start_x, 5.0}, 0.0}, {start_x - 0.8, 2.0});
    auto fsm = FsmPolicy::for_episode(cfg);
    Env env;
    Observation obs = env.reset(cfg);
    fsm.begin_episode(1);
    Action a = Action::Forward;
    while (!env.done() && (a = fsm.act(obs)) == Action::Forward) obs = env.step(a).observation;
    ASSERT_FALSE(env.done()) << "start x " << start_x;
    EXPECT_NE(env.step(a).outcome, Outcome::Collision) << "start x " << start_x;
    EXPECT_FALSE(collision(env.pose(), env.world().arena, cfg.robot_radius));
  }
}

TEST(Fsm, PolicyResetsBetweenEpisodes) {
  const auto cfg = EpisodeConfig{};
  auto fsm = FsmPolicy::for_episode(cfg);
  fsm.begin_episode(3);
  fsm.act(front_reading(0.1));
  EXPECT_EQ(fsm.state().mode, FsmState::Mode::Turn);
  fsm.begin_episode(3);
  EXPECT_EQ(fsm.state().mode, FsmState::Mode::Cruise);
  EXPECT_DOUBLE_EQ(fsm.params().turn_deg_per_step, 27.0);
}

TEST(Random, UniformActions) {
  Rng rng(8);
  std::array<int, 3> counts{};
  constexpr int n = 100'000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(random_act(rng))];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.02);
}

TEST(Random, Reproducible) {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(random_act(a), random_act(b));
}

}  // namespace
