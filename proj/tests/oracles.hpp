#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance run.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seek/env.hpp"
#include "seek/mlp.hpp"
#include "seek/rng.hpp"

namespace seek::oracle {

/// Plain matrix-vector forward pass written without Mlp::layer.
inline std::array<float, 3> forward(const Mlp<float>& net, const std::array<float, 6>& x) {
  const auto p = net.params();
  std::vector<float> in(x.begin(), x.end());
  std::size_t off = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    const std::size_t rows = kLayerDims[l + 1], cols = kLayerDims[l];
    std::vector<float> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      float acc = p[off + rows * cols + r];
      for (std::size_t c = 0; c < cols; ++c) acc += p[off + r * cols + c] * in[c];
      out[r] = l < 2 ? (acc > 0.0f ? acc : 0.0f) : acc;
    }
    off += rows * cols + rows;
    in = out;
  }
  return {in[0], in[1], in[2]};
}

/// Reward recomputed from logged flags.
inline double reward(bool alpha, bool beta, double delta_distance) {
  double r = -1.0 - 20.0 * delta_distance;
  if (alpha) r += 1000.0;
  if (beta) r -= 100.0;
  return r;
}

/// SPL by direct summation over (success, l, p) triples.
struct SplCase {
  bool success;
  double l;
  double p;
};

inline double spl(const std::vector<SplCase>& cases) {
  double sum = 0.0;
  for (const auto& c : cases) {
    if (!c.success) continue;
    const double optimal = c.l - 1.0;
    sum += c.p > optimal ? optimal / c.p : 1.0;
  }
  return sum / static_cast<double>(cases.size());
}

/// Which branch every ReLU unit and every Huber term is on. Two parameter
/// vectors with equal signatures lie on the same smooth piece of the loss.
inline std::vector<std::int8_t> kink_signature(const Mlp<double>& net, const std::vector<Transition<double>>& batch,
                                               const Mlp<double>& target, double gamma) {
  std::vector<std::int8_t> sig;
  for (const auto& t : batch) {
    std::array<double, 20> z1{}, h1{}, z2{}, h2{};
    std::array<double, 3> q{};
    net.layer(0, t.obs, z1);
    for (std::size_t i = 0; i < 20; ++i) {
      sig.push_back(z1[i] > 0.0);
      h1[i] = std::max(z1[i], 0.0);
    }
    net.layer(1, h1, z2);
    for (std::size_t i = 0; i < 20; ++i) {
      sig.push_back(z2[i] > 0.0);
      h2[i] = std::max(z2[i], 0.0);
    }
    net.layer(2, h2, q);
    const double delta = q[t.action] - td_target(t, target, gamma);
    sig.push_back(static_cast<std::int8_t>(delta > 1.0 ? 1 : (delta < -1.0 ? -1 : 0)));
  }
  return sig;
}

struct GradientCheck {
  double max_rel_error = 0.0;
  int redraws = 0;
};

/// Central finite differences of the batch loss against backward(). An
/// instance whose loss has a kink within +-h of any coordinate is redrawn.
inline GradientCheck check_gradient(std::uint64_t seed, double h = 1e-3, std::size_t batch_size = 8) {
  GradientCheck out;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(splitmix64(seed * 1000 + attempt));
    Mlp<double> net = Mlp<double>::random(rng.next_u64());
    for (std::size_t l = 0; l < 3; ++l)
      for (auto& b : net.biases(l)) b = rng.uniform(-0.5, 0.5);
    const Mlp<double> target = Mlp<double>::random(rng.next_u64());
    const double gamma = 0.9;
    std::vector<Transition<double>> batch(batch_size);
    for (auto& t : batch) {
      for (auto& v : t.obs) v = rng.uniform(-1.0, 1.0);
      for (auto& v : t.next_obs) v = rng.uniform(-1.0, 1.0);
      t.action = static_cast<std::uint8_t>(rng.index(3));
      t.reward = rng.uniform(-3.0, 3.0);
      t.done = rng.bernoulli(0.2);
    }

    const auto base_sig = kink_signature(net, batch, target, gamma);
    const auto analytic = backward<double>(net, batch, target, gamma, Loss::Huber);
    bool kinked = false;
    double worst = 0.0;
    Mlp<double> probe = net;
    for (std::size_t k = 0; k < kParamCount && !kinked; ++k) {
      const double orig = probe.params()[k];
      probe.params()[k] = orig + h;
      kinked = kink_signature(probe, batch, target, gamma) != base_sig;
      const double up = batch_loss<double>(probe, batch, target, gamma, Loss::Huber);
      probe.params()[k] = orig - h;
      kinked = kinked || kink_signature(probe, batch, target, gamma) != base_sig;
      const double down = batch_loss<double>(probe, batch, target, gamma, Loss::Huber);
      probe.params()[k] = orig;

      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic.grad.params()[k];
      const double scale = std::max({std::abs(a), std::abs(numeric), 1e-6});
      worst = std::max(worst, std::abs(a - numeric) / scale);
    }
    if (kinked) {
      ++out.redraws;
      continue;
    }
    out.max_rel_error = worst;
    return out;
  }
}

}  // namespace seek::oracle
