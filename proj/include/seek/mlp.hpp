#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "seek/rng.hpp"

namespace seek {

enum class Activation : std::uint8_t { Relu = 0, Tanh = 1 };

inline constexpr std::size_t kLayerCount = 3;
inline constexpr std::array<std::size_t, kLayerCount + 1> kLayerDims{6, 20, 20, 3};
inline constexpr std::size_t kInputs = kLayerDims.front();
inline constexpr std::size_t kOutputs = kLayerDims.back();
inline constexpr std::size_t kWidest = 20;

constexpr std::size_t layer_param_count(std::size_t l) {
  return kLayerDims[l] * kLayerDims[l + 1] + kLayerDims[l + 1];
}
constexpr std::size_t layer_offset(std::size_t l) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < l; ++k) off += layer_param_count(k);
  return off;
}
inline constexpr std::size_t kParamCount = layer_offset(kLayerCount);
static_assert(kParamCount == 623);

template <class T>
T activate(Activation act, T z) {
  return act == Activation::Relu ? std::max(z, T(0)) : std::tanh(z);
}

// Derivative expressed through the activation output h.
template <class T>
T activate_grad(Activation act, T z, T h) {
  return act == Activation::Relu ? (z > T(0) ? T(1) : T(0)) : T(1) - h * h;
}

/// The 6-20-20-3 Q-network.
///
/// Parameters live in one flat array in serialization order: for each layer,
/// weights row-major [out][in], then biases. Hidden layers use the configured
/// activation; the output layer is linear.
template <class T>
class Mlp {
 public:
  using Input = std::array<T, kInputs>;
  using Output = std::array<T, kOutputs>;

  explicit Mlp(Activation act = Activation::Relu) : act_(act), params_(kParamCount, T(0)) {}

  /// He-style uniform init: weights in +-sqrt(6 / fan_in), biases zero.
  static Mlp random(std::uint64_t seed, Activation act = Activation::Relu) {
    Mlp net(act);
    Rng rng(seed);
    for (std::size_t l = 0; l < kLayerCount; ++l) {
      const double bound = std::sqrt(6.0 / static_cast<double>(kLayerDims[l]));
      auto w = net.weights(l);
      for (auto& v : w) v = static_cast<T>(rng.uniform(-bound, bound));
    }
    return net;
  }

  Activation activation() const { return act_; }
  void set_activation(Activation act) { act_ = act; }

  std::span<T> params() { return params_; }
  std::span<const T> params() const { return params_; }

  std::span<T> weights(std::size_t l) {
    return {params_.data() + layer_offset(l), kLayerDims[l] * kLayerDims[l + 1]};
  }
  std::span<const T> weights(std::size_t l) const {
    return {params_.data() + layer_offset(l), kLayerDims[l] * kLayerDims[l + 1]};
  }
  std::span<T> biases(std::size_t l) {
    return {params_.data() + layer_offset(l) + kLayerDims[l] * kLayerDims[l + 1], kLayerDims[l + 1]};
  }
  std::span<const T> biases(std::size_t l) const {
    return {params_.data() + layer_offset(l) + kLayerDims[l] * kLayerDims[l + 1], kLayerDims[l + 1]};
  }

  /// Dense layer with pinned summation order: acc = bias, then += w * x in
  /// ascending input index. The inference kernel uses the same order.
  void layer(std::size_t l, std::span<const T> in, std::span<T> out) const {
    const std::size_t n_in = kLayerDims[l];
    const std::size_t n_out = kLayerDims[l + 1];
    const auto w = weights(l);
    const auto b = biases(l);
    for (std::size_t o = 0; o < n_out; ++o) {
      T acc = b[o];
      for (std::size_t i = 0; i < n_in; ++i) acc += w[o * n_in + i] * in[i];
      out[o] = acc;
    }
  }

  Output forward(const Input& x) const {
    for (T v : x)
      if (!std::isfinite(v)) throw std::domain_error("Mlp::forward: non-finite input");
    std::array<T, kWidest> h1{}, h2{};
    layer(0, x, std::span<T>(h1.data(), kLayerDims[1]));
    for (std::size_t i = 0; i < kLayerDims[1]; ++i) h1[i] = activate(act_, h1[i]);
    layer(1, std::span<const T>(h1.data(), kLayerDims[1]), std::span<T>(h2.data(), kLayerDims[2]));
    for (std::size_t i = 0; i < kLayerDims[2]; ++i) h2[i] = activate(act_, h2[i]);
    Output q{};
    layer(2, std::span<const T>(h2.data(), kLayerDims[2]), q);
    return q;
  }

  template <class U>
  Mlp<U> cast() const {
    Mlp<U> out(act_);
    std::transform(params_.begin(), params_.end(), out.params().begin(),
                   [](T v) { return static_cast<U>(v); });
    return out;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  Activation act_;
  std::vector<T> params_;
};

/// Lowest index wins ties.
template <class T>
std::size_t argmax(const std::array<T, kOutputs>& q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] > q[best]) best = i;
  return best;
}

enum class Loss : std::uint8_t { Huber, Mse };

template <class T>
struct Transition {
  std::array<T, kInputs> obs{};
  std::uint8_t action = 0;
  T reward = 0;
  std::array<T, kInputs> next_obs{};
  bool done = false;
};

template <class T>
struct GradientResult {
  Mlp<T> grad;
  T loss = 0;
};

/// TD target: r for terminal transitions, r + gamma * max_a' Q_target(s', a')
/// otherwise.
template <class T>
T td_target(const Transition<T>& t, const Mlp<T>& target, T gamma) {
  if (t.done) return t.reward;
  const auto q_next = target.forward(t.next_obs);
  return t.reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

template <class T>
T loss_value(Loss loss, T delta) {
  const T a = std::abs(delta);
  if (loss == Loss::Mse) return T(0.5) * delta * delta;
  return a <= T(1) ? T(0.5) * delta * delta : a - T(0.5);
}

template <class T>
T loss_slope(Loss loss, T delta) {
  if (loss == Loss::Mse) return delta;
  return std::clamp(delta, T(-1), T(1));
}

/// Gradient of the mean TD loss over the batch with respect to every
/// parameter of `net`. The target network is held constant.
template <class T>
GradientResult<T> backward(const Mlp<T>& net, std::span<const Transition<T>> batch,
                           const Mlp<T>& target, T gamma, Loss loss) {
  if (batch.empty()) throw std::invalid_argument("backward: empty batch");
  GradientResult<T> out{Mlp<T>(net.activation()), T(0)};
  auto& g = out.grad;
  const Activation act = net.activation();
  const T inv_n = T(1) / static_cast<T>(batch.size());
  constexpr std::size_t n0 = kLayerDims[0], n1 = kLayerDims[1], n2 = kLayerDims[2], n3 = kLayerDims[3];

  for (const auto& t : batch) {
    std::array<T, n1> z1{}, h1{};
    std::array<T, n2> z2{}, h2{};
    std::array<T, n3> q{};
    net.layer(0, t.obs, z1);
    for (std::size_t i = 0; i < n1; ++i) h1[i] = activate(act, z1[i]);
    net.layer(1, h1, z2);
    for (std::size_t i = 0; i < n2; ++i) h2[i] = activate(act, z2[i]);
    net.layer(2, h2, q);

    const T delta = q[t.action] - td_target(t, target, gamma);
    out.loss += loss_value(loss, delta) * inv_n;

    std::array<T, n3> dq{};
    dq[t.action] = loss_slope(loss, delta) * inv_n;

    // Output layer.
    std::array<T, n2> dh2{};
    {
      auto w = net.weights(2);
      auto gw = g.weights(2);
      auto gb = g.biases(2);
      for (std::size_t o = 0; o < n3; ++o) {
        if (dq[o] == T(0)) continue;
        gb[o] += dq[o];
        for (std::size_t i = 0; i < n2; ++i) {
          gw[o * n2 + i] += dq[o] * h2[i];
          dh2[i] += w[o * n2 + i] * dq[o];
        }
      }
    }
    std::array<T, n2> dz2{};
    for (std::size_t i = 0; i < n2; ++i) dz2[i] = dh2[i] * activate_grad(act, z2[i], h2[i]);

    std::array<T, n1> dh1{};
    {
      auto w = net.weights(1);
      auto gw = g.weights(1);
      auto gb = g.biases(1);
      for (std::size_t o = 0; o < n2; ++o) {
        gb[o] += dz2[o];
        for (std::size_t i = 0; i < n1; ++i) {
          gw[o * n1 + i] += dz2[o] * h1[i];
          dh1[i] += w[o * n1 + i] * dz2[o];
        }
      }
    }
    std::array<T, n1> dz1{};
    for (std::size_t i = 0; i < n1; ++i) dz1[i] = dh1[i] * activate_grad(act, z1[i], h1[i]);
    {
      auto gw = g.weights(0);
      auto gb = g.biases(0);
      for (std::size_t o = 0; o < n1; ++o) {
        gb[o] += dz1[o];
        for (std::size_t i = 0; i < n0; ++i) gw[o * n0 + i] += dz1[o] * t.obs[i];
      }
    }
  }
  return out;
}

/// Mean TD loss over a batch, forward only.
template <class T>
T batch_loss(const Mlp<T>& net, std::span<const Transition<T>> batch, const Mlp<T>& target, T gamma,
             Loss loss) {
  T total = 0;
  for (const auto& t : batch) {
    const auto q = net.forward(t.obs);
    total += loss_value(loss, q[t.action] - td_target(t, target, gamma));
  }
  return total / static_cast<T>(batch.size());
}

/// Adam over the flat parameter vector.
template <class T>
class Adam {
 public:
  explicit Adam(T lr = T(1e-3), T beta1 = T(0.9), T beta2 = T(0.999), T eps = T(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(kParamCount, T(0)), v_(kParamCount, T(0)) {}

  void step(Mlp<T>& net, const Mlp<T>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(static_cast<double>(beta1_), static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(static_cast<double>(beta2_), static_cast<double>(t_));
    auto p = net.params();
    auto g = grad.params();
    for (std::size_t i = 0; i < kParamCount; ++i) {
      m_[i] = beta1_ * m_[i] + (T(1) - beta1_) * g[i];
      v_[i] = beta2_ * v_[i] + (T(1) - beta2_) * g[i] * g[i];
      const T m_hat = static_cast<T>(m_[i] / c1);
      const T v_hat = static_cast<T>(v_[i] / c2);
      p[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }

  std::uint64_t steps() const { return t_; }

 private:
  T lr_, beta1_, beta2_, eps_;
  std::vector<T> m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace seek
