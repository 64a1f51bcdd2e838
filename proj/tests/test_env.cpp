#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "seek/baselines.hpp"
#include "seek/env.hpp"
#include "support.hpp"

using namespace seek;
using seek::testing::ConstantPolicy;
using seek::testing::fixed_world;

namespace {

TEST(Reward, Formula) {
  EXPECT_DOUBLE_EQ(step_reward(false, false, 0.0), -1.0);
  EXPECT_DOUBLE_EQ(step_reward(false, true, 0.0), -101.0);
  EXPECT_DOUBLE_EQ(step_reward(true, false, -0.05), 1000.0);
}

TEST(Env, TurnInPlaceCostsOne) {
  Env env;
  env.reset(fixed_world({{5, 5}, 0}, {8, 8}));
  const auto r = env.step(Action::Left);
  EXPECT_EQ(r.info.delta_distance, 0.0);
  EXPECT_EQ(r.reward, -1.0);
  EXPECT_FALSE(r.done);
  EXPECT_NEAR(r.info.pose.heading, 27.0 * std::numbers::pi / 180.0, 1e-12);
}

TEST(Env, ResetIsDeterministic) {
  EpisodeConfig cfg;
  cfg.seed = 1234;
  cfg.obstacle_count = 3;
  Env a, b;
  EXPECT_EQ(a.reset(cfg), b.reset(cfg));
  EXPECT_EQ(a.world().source, b.world().source);
}

TEST(Env, EmptyRoomLasersFromCenter) {
  EpisodeConfig cfg;
  cfg.arena_width = cfg.arena_height = 5.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    Env env;
    const auto obs = env.reset(cfg);
    const auto s = laser_scan(env.pose(), env.world().arena);
    EXPECT_DOUBLE_EQ(obs[0], s.front / 5.0);
    EXPECT_DOUBLE_EQ(obs[1], s.right / 5.0);
    EXPECT_DOUBLE_EQ(obs[2], s.back / 5.0);
    EXPECT_DOUBLE_EQ(obs[3], s.left / 5.0);
    EXPECT_EQ(obs[4], 0.0);
  }
  cfg.seed = 0;
  cfg.scenario = Scenario{Arena{5, 5, {}}, {{2.5, 2.5}, 0.0}, {4.2, 4.2}};
  Env env;
  const auto obs = env.reset(cfg);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(obs[i], 0.5, 1e-12);
}

TEST(Env, CrowdedSmallRoomGenerates) {
  EpisodeConfig cfg;
  cfg.arena_width = cfg.arena_height = 5.0;
  cfg.obstacle_count = 7;
  cfg.obstacle_half_min = cfg.obstacle_half_max = 0.25;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.seed = seed;
    const Scenario sc = generate_scenario(cfg);
    ASSERT_EQ(sc.arena.obstacles.size(), 7u);
    EXPECT_GE(distance(sc.start.position, sc.source), cfg.min_source_distance);
    EXPECT_FALSE(collision(sc.start, sc.arena, cfg.robot_radius));
    for (const auto& box : sc.arena.obstacles) {
      EXPECT_GE(distance_to_box(sc.start.position, box), cfg.obstacle_spawn_clearance);
      EXPECT_GE(distance_to_box(sc.source, box), cfg.obstacle_source_clearance);
    }
  }
}

TEST(Env, OvercrowdedRoomFails) {
  EpisodeConfig cfg;
  cfg.arena_width = cfg.arena_height = 3.0;
  cfg.obstacle_count = 40;
  cfg.obstacle_half_min = cfg.obstacle_half_max = 0.4;
  EXPECT_THROW(generate_scenario(cfg), GenerationError);
}

TEST(Env, StepRules) {
  Env env;
  EXPECT_THROW(env.step(Action::Forward), std::logic_error);
  env.reset(fixed_world({{5, 5}, 0}, {6.2, 5}));
  while (!env.done()) env.step(Action::Forward);
  EXPECT_THROW(env.step(Action::Forward), std::logic_error);
}

// Straight run to a source on the initial heading: the success disc is
// reached after ceil((l - r) / (v * dt)) decisions.
int expected_forward_steps(double l, double dt) { return static_cast<int>(std::ceil((l - 1.0) / (0.5 * dt))); }

TEST(RunEpisode, ForwardReachesSourceAhead) {
  ConstantPolicy fwd(Action::Forward);
  const auto rec = run_episode(fwd, fixed_world({{5, 5}, 0}, {6.5, 5}));
  EXPECT_EQ(rec.outcome, Outcome::Success);
  EXPECT_EQ(rec.steps, 2);
  EXPECT_EQ(rec.steps, expected_forward_steps(1.5, 0.5));
  EXPECT_EQ(rec.final_distance, 1.0);
}

TEST(RunEpisode, ForwardStepCountFollowsSpeed) {
  ConstantPolicy fwd(Action::Forward);
  for (double dt : {0.5, 0.1, 0.25}) {
    for (double l : {1.52, 2.31, 3.93}) {
      auto cfg = fixed_world({{5, 5}, 0}, {5 + l, 5});
      cfg.dt = dt;
      const auto rec = run_episode(fwd, cfg);
      EXPECT_EQ(rec.outcome, Outcome::Success) << "l=" << l << " dt=" << dt;
      EXPECT_EQ(rec.steps, expected_forward_steps(l, dt)) << "l=" << l << " dt=" << dt;
    }
  }
}

TEST(RunEpisode, SpinningTimesOut) {
  ConstantPolicy left(Action::Left);
  auto cfg = fixed_world({{5, 5}, 0}, {8, 8});
  const auto rec = run_episode(left, cfg, true);
  EXPECT_EQ(rec.outcome, Outcome::Timeout);
  EXPECT_EQ(rec.steps, 300);
  EXPECT_EQ(rec.path_length, 0.0);
  EXPECT_EQ(rec.trajectory.back().reward, -101.0);
  EXPECT_TRUE(rec.trajectory.back().beta);
  EXPECT_DOUBLE_EQ(rec.total_return, -300.0 - 100.0);
}

TEST(RunEpisode, DrivingIntoWallCollides) {
  ConstantPolicy fwd(Action::Forward);
  auto cfg = fixed_world({{1.0, 5}, std::numbers::pi}, {8, 5});
  const auto rec = run_episode(fwd, cfg, true);
  EXPECT_EQ(rec.outcome, Outcome::Collision);
  const auto& last = rec.trajectory.back();
  EXPECT_TRUE(last.beta);
  EXPECT_TRUE(collision(last.pose, rec.world->arena, cfg.robot_radius));
  EXPECT_DOUBLE_EQ(last.reward, -101.0 - 20.0 * last.delta_distance);
  EXPECT_LT(rec.steps, 300);
}

TEST(RunEpisode, SuccessBeatsCollision) {
  // Source hugging the wall: the final substep can touch both.
  ConstantPolicy fwd(Action::Forward);
  auto cfg = fixed_world({{5, 5}, 0}, {9.95, 5});
  cfg.success_radius = 1.0;
  const auto rec = run_episode(fwd, cfg);
  EXPECT_EQ(rec.outcome, Outcome::Success);
}

TEST(RunEpisode, TrajectoriesAreDeterministic) {
  for (std::uint64_t seed : {3u, 99u}) {
    EpisodeConfig cfg;
    cfg.seed = seed;
    cfg.obstacle_count = 3;
    auto p1 = FsmPolicy::for_episode(cfg);
    auto p2 = FsmPolicy::for_episode(cfg);
    const auto a = run_episode(p1, cfg, true);
    const auto b = run_episode(p2, cfg, true);
    ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
      EXPECT_EQ(a.trajectory[i].pose.position, b.trajectory[i].pose.position);
      EXPECT_EQ(a.trajectory[i].c, b.trajectory[i].c);
      EXPECT_EQ(a.trajectory[i].reward, b.trajectory[i].reward);
    }
    EXPECT_EQ(a.total_return, b.total_return);
  }
}

TEST(RunEpisode, Invariants) {
  RandomPolicy random;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    EpisodeConfig cfg;
    cfg.seed = seed;
    cfg.obstacle_count = static_cast<int>(seed % 4);
    const auto rec = run_episode(random, cfg, true);
    EXPECT_LE(rec.steps, 300);
    EXPECT_EQ(rec.success, rec.final_distance <= cfg.success_radius);
    if (rec.outcome == Outcome::Collision) {
      EXPECT_TRUE(collision(rec.trajectory.back().pose, rec.world->arena, cfg.robot_radius));
    }
    const double expected = 1000.0 * rec.success - 100.0 * !rec.success -
                            20.0 * (rec.final_distance - rec.shortest_path) - rec.steps;
    EXPECT_NEAR(rec.total_return, expected, 1e-9);
  }
}

TEST(RunEpisode, PolicyDoesNotChangeWorld) {
  EpisodeConfig cfg;
  cfg.seed = 77;
  cfg.obstacle_count = 3;
  ConstantPolicy left(Action::Left);
  RandomPolicy random;
  const auto a = run_episode(left, cfg, true);
  const auto b = run_episode(random, cfg, true);
  EXPECT_EQ(a.world->source, b.world->source);
  EXPECT_EQ(a.trajectory[0].c, b.trajectory[0].c);
}

TEST(Env, ValidateRejectsBadConfig) {
  EpisodeConfig cfg;
  cfg.dt = 0.0;
  Env env;
  EXPECT_THROW(env.reset(cfg), std::invalid_argument);
  cfg = {};
  cfg.scenario = Scenario{Arena{5, 5, {}}, {{6, 1}, 0}, {1, 1}};
  EXPECT_THROW(env.reset(cfg), std::invalid_argument);
}

}  // namespace
