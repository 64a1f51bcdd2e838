#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "seek/env.hpp"

namespace seek {

struct Summary {
  std::size_t n = 0;
  double success_rate = 0.0;
  double mean_steps = 0.0;     // successes only
  double mean_distance = 0.0;  // successes only
  double spl = 0.0;
  double mean_path_all = 0.0;  // every attempt

  friend bool operator==(const Summary&, const Summary&) = default;
};

/// Success weighted by path length, with the start distance reduced by the
/// 1 m success radius: mean of S_i * (l_i - 1) / max(p_i, l_i - 1).
inline double spl(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("spl: no records");
  double total = 0.0;
  for (const auto& r : records) {
    if (!(r.shortest_path > 1.0)) throw std::domain_error("spl: shortest path must exceed 1 m");
    if (!r.success) continue;
    const double l = r.shortest_path - 1.0;
    total += l / std::max(r.path_length, l);
  }
  return total / static_cast<double>(records.size());
}

inline Summary summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  Summary s;
  s.n = records.size();
  std::size_t wins = 0;
  double steps = 0.0, dist = 0.0, path_all = 0.0;
  for (const auto& r : records) {
    path_all += r.path_length;
    if (!r.success) continue;
    ++wins;
    steps += r.steps;
    dist += r.path_length;
  }
  s.success_rate = static_cast<double>(wins) / static_cast<double>(s.n);
  if (wins > 0) {
    s.mean_steps = steps / static_cast<double>(wins);
    s.mean_distance = dist / static_cast<double>(wins);
  }
  s.mean_path_all = path_all / static_cast<double>(s.n);
  s.spl = spl(records);
  return s;
}

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

struct EvalSettings {
  std::size_t n_episodes = 100;
  std::uint64_t base_seed = 0;
  std::vector<int> obstacle_counts{0, 3};  // episode i uses counts[i % size]
  unsigned workers = 1;
  bool log_trajectories = false;
};

struct EvalResult {
  std::vector<RunRecord> records;
  Summary summary;
};

/// Episode i runs with seed base_seed + i. Records come back in seed order
/// regardless of worker count.
inline EvalResult evaluate(const PolicyFactory& make_policy, const EpisodeConfig& tmpl,
                           const EvalSettings& s) {
  if (s.n_episodes == 0) throw std::invalid_argument("evaluate: n_episodes must be >= 1");
  if (s.obstacle_counts.empty()) throw std::invalid_argument("evaluate: empty obstacle schedule");
  EvalResult out;
  out.records.resize(s.n_episodes);

  const auto episode_config = [&](std::size_t i) {
    EpisodeConfig cfg = tmpl;
    cfg.seed = s.base_seed + i;
    cfg.obstacle_count = s.obstacle_counts[i % s.obstacle_counts.size()];
    return cfg;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(s.workers, static_cast<unsigned>(s.n_episodes)));
  if (workers == 1) {
    auto policy = make_policy();
    for (std::size_t i = 0; i < s.n_episodes; ++i)
      out.records[i] = run_episode(*policy, episode_config(i), s.log_trajectories);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          auto policy = make_policy();
          for (std::size_t i = next++; i < s.n_episodes; i = next++)
            out.records[i] = run_episode(*policy, episode_config(i), s.log_trajectories);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  out.summary = summarize(out.records);
  return out;
}

struct NamedPolicy {
  std::string name;
  PolicyFactory factory;
};

struct ComparisonRow {
  std::string name;
  Summary summary;
};

/// Evaluates every policy on the same seed set.
inline std::vector<ComparisonRow> compare(const std::vector<NamedPolicy>& policies,
                                          const EpisodeConfig& tmpl, const EvalSettings& s) {
  if (policies.empty()) throw std::invalid_argument("compare: no policies");
  std::vector<ComparisonRow> rows;
  for (const auto& p : policies) rows.push_back({p.name, evaluate(p.factory, tmpl, s).summary});
  return rows;
}

inline std::string comparison_table(const std::vector<ComparisonRow>& rows) {
  std::string out = fmt::format("{:<10} {:>5} {:>8} {:>9} {:>13} {:>6} {:>13}\n", "policy", "n",
                                "success", "steps", "distance[m]", "spl", "path_all[m]");
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out += fmt::format("{:<10} {:>5} {:>7.1f}% {:>9.2f} {:>13.2f} {:>6.3f} {:>13.2f}\n", r.name, s.n,
                       100.0 * s.success_rate, s.mean_steps, s.mean_distance, s.spl, s.mean_path_all);
  }
  return out;
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "policy,n,success_rate,mean_steps,mean_distance,spl,mean_path_all\n";
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.name, s.n, s.success_rate,
                       s.mean_steps, s.mean_distance, s.spl, s.mean_path_all);
  }
  return out;
}

inline std::string records_csv(const std::vector<RunRecord>& records) {
  std::string out = "seed,obstacles,outcome,success,steps,path_length,shortest_path,final_distance,return\n";
  for (const auto& r : records)
    out += fmt::format("{},{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.seed, r.obstacle_count,
                       outcome_name(r.outcome), r.success ? 1 : 0, r.steps, r.path_length,
                       r.shortest_path, r.final_distance, r.total_return);
  return out;
}

}  // namespace seek
