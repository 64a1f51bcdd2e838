#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "seek/env.hpp"
#include "seek/features.hpp"
#include "seek/mlp.hpp"
#include "seek/policy_blob.hpp"

namespace seek::tinyinfer {

enum class Status : std::uint8_t {
  Ok = 0,
  BadMagic = 1,
  BadVersion = 2,
  BadDims = 3,
  BadChecksum = 4,
  NonFinite = 5,
  NotLoaded = 6,
};

constexpr std::string_view status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::BadMagic: return "bad magic";
    case Status::BadVersion: return "bad version";
    case Status::BadDims: return "bad dimensions";
    case Status::BadChecksum: return "bad checksum";
    case Status::NonFinite: return "non-finite input";
    case Status::NotLoaded: return "not loaded";
  }
  return "?";
}

/// Sensor preprocessing settings baked into a context at load time.
struct SensorConfig {
  double laser_max_range = kLaserMaxRange;
  bool normalize_lasers = true;
  double filter_alpha = FeatureFilter::kDefaultAlpha;
  bool raw_gradient = false;
};

/// Fixed-size inference state: parameters, two scratch vectors, the light
/// filter and a little bookkeeping. Nothing is allocated after load(), and
/// the resident size is sizeof(InferenceContext).
class InferenceContext {
 public:
  using Input = std::array<float, kInputs>;
  using QValues = std::array<float, kOutputs>;

  InferenceContext() = default;

  /// Validates and installs a blob. All checks happen here.
  Status load(std::span<const std::uint8_t> bytes, const SensorConfig& sensors = {}) {
    loaded_ = false;
    Activation act{};
    const BlobStatus s = decode_blob(bytes, params_, act);
    if (s != BlobStatus::Ok) return static_cast<Status>(s);
    relu_ = act == Activation::Relu;
    laser_scale_ = sensors.normalize_lasers ? 1.0 / sensors.laser_max_range : 1.0;
    filter_ = FeatureFilter(sensors.filter_alpha, FeatureFilter::kDefaultEpsilon, sensors.raw_gradient);
    primed_ = false;
    loaded_ = true;
    return Status::Ok;
  }

  /// Sensor-to-action step: lasers in meters (front, right, back, left) and
  /// one normalized light reading. The first call seeds the filter.
  Status infer(std::span<const double, 4> laser_m, double c, Action& action) {
    if (!loaded_) return Status::NotLoaded;
    for (double v : laser_m)
      if (!std::isfinite(v)) return Status::NonFinite;
    if (!std::isfinite(c)) return Status::NonFinite;
    c = c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);

    features_ = primed_ ? filter_.update(c) : filter_.reset(c);
    primed_ = true;
    Input x{};
    for (std::size_t i = 0; i < 4; ++i) x[i] = static_cast<float>(laser_m[i] * laser_scale_);
    x[4] = static_cast<float>(features_.s1);
    x[5] = static_cast<float>(features_.s2);
    return q_values(x, action);
  }

  /// Network-only path on an already assembled input vector.
  Status q_values(const Input& x, Action& action) {
    if (!loaded_) return Status::NotLoaded;
    for (float v : x)
      if (!std::isfinite(v)) return Status::NonFinite;
    dense(0, x.data(), a_.data());
    hidden(a_.data(), kLayerDims[1]);
    dense(1, a_.data(), b_.data());
    hidden(b_.data(), kLayerDims[2]);
    dense(2, b_.data(), q_.data());
    std::size_t best = 0;
    for (std::size_t i = 1; i < kOutputs; ++i)
      if (q_[i] > q_[best]) best = i;
    action = static_cast<Action>(best);
    return Status::Ok;
  }

  /// Restarts the light filter for a new run; parameters stay loaded.
  void restart() { primed_ = false; }

  const QValues& last_q() const { return q_; }
  const SourceFeatures& last_features() const { return features_; }
  double filter_level() const { return filter_.level(); }
  bool loaded() const { return loaded_; }
  std::span<const float, kParamCount> params() const { return params_; }

  /// Total resident bytes, from the type layout.
  static constexpr std::size_t footprint() { return sizeof(InferenceContext); }

 private:
  // acc = bias, then += w * x in ascending input order, matching Mlp::layer.
  void dense(std::size_t l, const float* in, float* out) const {
    const std::size_t n_in = kLayerDims[l];
    const std::size_t n_out = kLayerDims[l + 1];
    const float* w = params_.data() + layer_offset(l);
    const float* b = w + n_in * n_out;
    for (std::size_t o = 0; o < n_out; ++o) {
      float acc = b[o];
      for (std::size_t i = 0; i < n_in; ++i) acc += w[o * n_in + i] * in[i];
      out[o] = acc;
    }
  }

  void hidden(float* v, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) v[i] = relu_ ? std::max(v[i], 0.0f) : std::tanh(v[i]);
  }

  std::array<float, kParamCount> params_{};
  std::array<float, kWidest> a_{};
  std::array<float, kWidest> b_{};
  QValues q_{};
  FeatureFilter filter_;
  SourceFeatures features_;
  double laser_scale_ = 1.0 / kLaserMaxRange;
  bool relu_ = true;
  bool primed_ = false;
  bool loaded_ = false;
};

}  // namespace seek::tinyinfer
