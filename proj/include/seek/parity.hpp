#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

#include "seek/dqn.hpp"
#include "seek/features.hpp"
#include "seek/policy_blob.hpp"
#include "seek/rng.hpp"
#include "seek/tinyinfer.hpp"

namespace seek {

inline constexpr double kParityTolerance = 1e-6;
inline constexpr double kTieGap = 2e-6;
inline constexpr std::size_t kFootprintBudget = 20'992;  // 20.5 kB

struct ParityReport {
  std::size_t cases = 0;
  double max_deviation = 0.0;
  std::size_t off_tie = 0;           // cases whose top-2 gap exceeds kTieGap
  std::size_t off_tie_agreement = 0;
  std::size_t agreement = 0;         // all cases
  std::size_t footprint = 0;

  bool parity_ok() const { return max_deviation <= kParityTolerance && off_tie_agreement == off_tie; }
  bool footprint_ok() const { return footprint < kFootprintBudget; }
};

inline double top2_gap(const std::array<float, kOutputs>& q) {
  std::array<float, kOutputs> s = q;
  std::sort(s.begin(), s.end(), std::greater<>());
  return static_cast<double>(s[0]) - static_cast<double>(s[1]);
}

/// Feeds the same random sensor streams through the trainer-side pipeline
/// (FeatureFilter, observation assembly, Mlp::forward) and through the
/// inference kernel, and compares Q-values and actions. Streams restart
/// every `run_length` cases, like episodes.
inline ParityReport run_parity(std::span<const std::uint8_t> blob_bytes, std::size_t n_cases, std::uint64_t seed,
                               const tinyinfer::SensorConfig& sensors = {}, std::size_t run_length = 100) {
  const Mlp<float> net = load_policy(blob_bytes);
  tinyinfer::InferenceContext ctx;
  if (const auto s = ctx.load(blob_bytes, sensors); s != tinyinfer::Status::Ok)
    throw BlobError(static_cast<BlobStatus>(s), "parity");

  ParityReport rep;
  rep.cases = n_cases;
  rep.footprint = ctx.footprint();
  Rng rng(seed);
  FeatureFilter filter(sensors.filter_alpha, FeatureFilter::kDefaultEpsilon, sensors.raw_gradient);
  const double k = sensors.normalize_lasers ? 1.0 / sensors.laser_max_range : 1.0;

  for (std::size_t i = 0; i < n_cases; ++i) {
    const bool first = i % run_length == 0;
    if (first) ctx.restart();
    std::array<double, 4> laser{};
    for (auto& l : laser) l = rng.uniform(0.0, sensors.laser_max_range);
    const double c = rng.uniform01();

    const SourceFeatures f = first ? filter.reset(c) : filter.update(c);
    Observation obs{{laser[0] * k, laser[1] * k, laser[2] * k, laser[3] * k, f.s1, f.s2}};
    const auto q_ref = net.forward(to_input(obs));
    const auto a_ref = static_cast<Action>(argmax(q_ref));

    Action a_kernel{};
    if (ctx.infer(laser, c, a_kernel) != tinyinfer::Status::Ok) throw std::logic_error("parity: kernel rejected input");
    const auto& q = ctx.last_q();
    for (std::size_t j = 0; j < kOutputs; ++j)
      rep.max_deviation = std::max(rep.max_deviation, std::abs(static_cast<double>(q[j]) - static_cast<double>(q_ref[j])));
    if (a_kernel == a_ref) ++rep.agreement;
    if (top2_gap(q_ref) > kTieGap) {
      ++rep.off_tie;
      if (a_kernel == a_ref) ++rep.off_tie_agreement;
    }
  }
  return rep;
}

}  // namespace seek
