#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "seek/env.hpp"
#include "seek/eval.hpp"
#include "seek/mlp.hpp"
#include "seek/replay.hpp"
#include "seek/rng.hpp"

namespace seek {

inline std::array<float, kInputs> to_input(const Observation& obs) {
  std::array<float, kInputs> x{};
  for (std::size_t i = 0; i < kInputs; ++i) x[i] = static_cast<float>(obs[i]);
  return x;
}

inline Action act_greedy(const Mlp<float>& net, const Observation& obs) {
  return static_cast<Action>(argmax(net.forward(to_input(obs))));
}

/// One uniform draw decides exploration; a second picks the random action.
inline Action act_epsilon(const Mlp<float>& net, const Observation& obs, double epsilon, Rng& rng) {
  if (rng.uniform01() < epsilon) return static_cast<Action>(rng.index(kNumActions));
  return act_greedy(net, obs);
}

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(std::shared_ptr<const Mlp<float>> net) : net_(std::move(net)) {}
  Action act(const Observation& obs) override { return act_greedy(*net_, obs); }

 private:
  std::shared_ptr<const Mlp<float>> net_;
};

inline PolicyFactory greedy_factory(const Mlp<float>& net) {
  auto shared = std::make_shared<const Mlp<float>>(net);
  return [shared] { return std::make_unique<GreedyPolicy>(shared); };
}

struct TrainConfig {
  double gamma = 0.99;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t buffer_capacity = 50'000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::uint64_t epsilon_decay_steps = 30'000;
  std::uint64_t target_sync_steps = 1'000;
  std::uint64_t total_steps = 150'000;
  std::uint64_t seed = 1;
  Loss loss = Loss::Huber;
  Activation activation = Activation::Relu;
  // Rewards are multiplied by this before entering the replay buffer. It
  // rescales Q-values without changing the optimal policy.
  double reward_scale = 0.01;
  std::size_t eval_every_episodes = 250;
  std::size_t eval_episodes = 50;
  std::uint64_t eval_seed_base = 1'000'000;
  std::vector<int> obstacle_counts{0, 3};

  void validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("train.gamma must be in (0,1)");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train.learning_rate must be > 0");
    if (batch_size == 0) throw std::invalid_argument("train.batch_size must be >= 1");
    if (buffer_capacity < batch_size) throw std::invalid_argument("train.buffer_capacity must be >= batch_size");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0)) throw std::invalid_argument("train.epsilon_start must be in [0,1]");
    if (!(epsilon_end >= 0.0 && epsilon_end <= 1.0)) throw std::invalid_argument("train.epsilon_end must be in [0,1]");
    if (target_sync_steps == 0) throw std::invalid_argument("train.target_sync_steps must be >= 1");
    if (!(reward_scale > 0.0)) throw std::invalid_argument("train.reward_scale must be > 0");
    if (obstacle_counts.empty()) throw std::invalid_argument("train.obstacle_counts must not be empty");
    if (eval_every_episodes > 0 && eval_episodes == 0) throw std::invalid_argument("train.eval_episodes must be >= 1");
  }
};

/// Linear decay from start to end over decay_steps, then flat.
inline double epsilon_at(const TrainConfig& cfg, std::uint64_t step) {
  if (cfg.epsilon_decay_steps == 0 || step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
  const double f = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
  return cfg.epsilon_start + f * (cfg.epsilon_end - cfg.epsilon_start);
}

struct EpisodeLog {
  std::size_t episode = 0;
  int steps = 0;
  Outcome outcome = Outcome::Running;
  double episode_return = 0.0;
  double rolling_success = 0.0;  // trailing 100 episodes
  double rolling_steps = 0.0;    // trailing 100, successes only
};

struct SnapshotEval {
  std::size_t episode = 0;
  std::uint64_t step = 0;
  Summary summary;
  bool selected = false;
};

struct TrainLog {
  std::vector<EpisodeLog> episodes;
  std::vector<SnapshotEval> evaluations;
  std::uint64_t total_steps = 0;

  std::string episodes_csv() const {
    std::string out = "episode,steps,outcome,return,rolling_success,rolling_steps\n";
    for (const auto& e : episodes)
      out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", e.episode, e.steps, outcome_name(e.outcome),
                         e.episode_return, e.rolling_success, e.rolling_steps);
    return out;
  }

  std::string evaluations_csv() const {
    std::string out = "episode,step,success_rate,mean_steps,spl,selected\n";
    for (const auto& e : evaluations)
      out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{}\n", e.episode, e.step, e.summary.success_rate,
                         e.summary.mean_steps, e.summary.spl, e.selected ? 1 : 0);
    return out;
  }
};

struct TrainResult {
  Mlp<float> net;
  TrainLog log;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Produces the world settings for a training episode.
using EnvFactory = std::function<EpisodeConfig(std::size_t episode)>;

/// Training episodes draw worlds from a seed stream derived from the
/// training seed; obstacle counts cycle through cfg.obstacle_counts.
inline EnvFactory default_env_factory(const EpisodeConfig& tmpl, const TrainConfig& cfg) {
  const std::uint64_t base = splitmix64(cfg.seed ^ 0x7A11'5EEDULL);
  const std::vector<int> counts = cfg.obstacle_counts;
  return [tmpl, base, counts](std::size_t episode) {
    EpisodeConfig e = tmpl;
    e.seed = base + episode;
    e.obstacle_count = counts[episode % counts.size()];
    return e;
  };
}

/// Greedy-evaluation score: success rate first, then fewer steps.
inline bool better_snapshot(const Summary& a, const Summary& b) {
  if (a.success_rate != b.success_rate) return a.success_rate > b.success_rate;
  return a.mean_steps < b.mean_steps;
}

/// Epsilon-greedy DQN with uniform replay and a hard-synced target network.
/// One gradient step per environment step once the buffer holds a batch.
/// Returns the best greedy snapshot when periodic evaluation is enabled,
/// otherwise the final network.
inline TrainResult train(const EnvFactory& make_env, const EpisodeConfig& eval_template,
                         const TrainConfig& cfg,
                         const std::function<void(const EpisodeLog&)>& on_episode = {}) {
  cfg.validate();
  TrainResult result{Mlp<float>::random(derive_seed(cfg.seed, Stream::Init), cfg.activation), {}};
  if (cfg.total_steps == 0) return result;

  Mlp<float>& net = result.net;
  Mlp<float> target = net;
  Adam<float> adam(static_cast<float>(cfg.learning_rate));
  ReplayBuffer<float> replay(cfg.buffer_capacity);
  Rng explore(derive_seed(cfg.seed, Stream::Explore));
  Rng replay_rng(derive_seed(cfg.seed, Stream::Replay));
  std::vector<Transition<float>> batch;
  const float gamma = static_cast<float>(cfg.gamma);
  const float scale = static_cast<float>(cfg.reward_scale);

  EvalSettings eval;
  eval.n_episodes = cfg.eval_episodes;
  eval.base_seed = cfg.eval_seed_base;
  eval.obstacle_counts = cfg.obstacle_counts;

  std::optional<Mlp<float>> best;
  std::size_t best_index = 0;
  const auto snapshot = [&](std::size_t episode, std::uint64_t step) {
    auto& evals = result.log.evaluations;
    evals.push_back({episode, step, evaluate(greedy_factory(net), eval_template, eval).summary, false});
    if (!best || better_snapshot(evals.back().summary, evals[best_index].summary)) {
      best = net;
      best_index = evals.size() - 1;
    }
  };

  std::deque<EpisodeLog> window;
  std::uint64_t step = 0;
  Env env;
  for (std::size_t episode = 0; step < cfg.total_steps; ++episode) {
    Observation obs = env.reset(make_env(episode));
    double ep_return = 0.0;
    StepResult r;
    while (!env.done() && step < cfg.total_steps) {
      const Action a = act_epsilon(net, obs, epsilon_at(cfg, step), explore);
      r = env.step(a);
      ep_return += r.reward;
      replay.push({to_input(obs), static_cast<std::uint8_t>(a), static_cast<float>(r.reward) * scale,
                   to_input(r.observation), r.done});
      obs = r.observation;
      ++step;

      if (replay.size() >= cfg.batch_size) {
        replay.sample(cfg.batch_size, replay_rng, batch);
        auto g = backward<float>(net, batch, target, gamma, cfg.loss);
        if (!std::isfinite(g.loss))
          throw TrainingDiverged(fmt::format("loss became non-finite at step {} (episode {})", step, episode));
        adam.step(net, g.grad);
      }
      if (step % cfg.target_sync_steps == 0) target = net;
    }
    if (!env.done()) break;  // budget ran out mid-episode

    EpisodeLog e{episode, env.steps(), r.outcome, ep_return, 0.0, 0.0};
    window.push_back(e);
    if (window.size() > 100) window.pop_front();
    std::size_t wins = 0;
    double steps_sum = 0.0;
    for (const auto& w : window) {
      if (w.outcome != Outcome::Success) continue;
      ++wins;
      steps_sum += w.steps;
    }
    e.rolling_success = static_cast<double>(wins) / static_cast<double>(window.size());
    e.rolling_steps = wins ? steps_sum / static_cast<double>(wins) : 0.0;
    result.log.episodes.push_back(e);
    if (on_episode) on_episode(e);

    if (cfg.eval_every_episodes > 0 && (episode + 1) % cfg.eval_every_episodes == 0) snapshot(episode + 1, step);
  }
  result.log.total_steps = step;
  if (cfg.eval_every_episodes > 0) {
    snapshot(result.log.episodes.size(), step);
    result.log.evaluations[best_index].selected = true;
    net = *best;
  }
  return result;
}

inline TrainResult train(const EpisodeConfig& tmpl, const TrainConfig& cfg,
                         const std::function<void(const EpisodeLog&)>& on_episode = {}) {
  return train(default_env_factory(tmpl, cfg), tmpl, cfg, on_episode);
}

}  // namespace seek
