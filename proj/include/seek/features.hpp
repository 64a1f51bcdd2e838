#pragma once

#include <algorithm>
#include <stdexcept>

namespace seek {

struct SourceFeatures {
  double s1 = 0.0;  // relative light change against the low-pass level
  double s2 = 0.0;  // low-pass level rescaled to [-1, 1]
};

/// Low-pass light filter producing the two source features.
///
///   c_f <- alpha * c_f + (1 - alpha) * c
///   s1   = (c - c_f) / max(c_f, epsilon_div)
///   s2   = 2 * c_f - 1
///
/// The filter update runs first; s1 and s2 use the updated c_f.
///
/// In raw mode (used for the unfiltered-gradient ablation) the filter is
/// bypassed: s1 = c - c_prev and s2 = 2 * c - 1.
class FeatureFilter {
 public:
  static constexpr double kDefaultAlpha = 0.9;
  static constexpr double kDefaultEpsilon = 1e-6;

  FeatureFilter() = default;
  explicit FeatureFilter(double alpha, double epsilon_div = kDefaultEpsilon, bool raw = false)
      : alpha_(alpha), epsilon_div_(epsilon_div), raw_(raw) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("filter alpha must be in [0,1)");
    if (!(epsilon_div > 0.0)) throw std::invalid_argument("filter epsilon must be > 0");
  }

  /// Seeds the filter with the first reading; returns (0, 2 * first_c - 1).
  SourceFeatures reset(double first_c) {
    if (!(first_c >= 0.0 && first_c <= 1.0))
      throw std::domain_error("FeatureFilter::reset: reading outside [0,1]");
    c_f_ = first_c;
    c_prev_ = first_c;
    return {0.0, 2.0 * first_c - 1.0};
  }

  SourceFeatures update(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("FeatureFilter::update: reading outside [0,1]");
    SourceFeatures out;
    if (raw_) {
      out.s1 = c - c_prev_;
      out.s2 = 2.0 * c - 1.0;
      c_f_ = c;
    } else {
      c_f_ = alpha_ * c_f_ + (1.0 - alpha_) * c;
      out.s1 = (c - c_f_) / std::max(c_f_, epsilon_div_);
      out.s2 = 2.0 * c_f_ - 1.0;
    }
    c_prev_ = c;
    return out;
  }

  double level() const { return c_f_; }
  double alpha() const { return alpha_; }
  double epsilon_div() const { return epsilon_div_; }
  bool raw() const { return raw_; }

  /// Sets c_f directly. Test and replay use only.
  void set_level(double c_f) { c_f_ = c_f; }

 private:
  double alpha_ = kDefaultAlpha;
  double epsilon_div_ = kDefaultEpsilon;
  bool raw_ = false;
  double c_f_ = 0.0;
  double c_prev_ = 0.0;
};

}  // namespace seek
