#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seek/rng.hpp"

namespace seek {

/// Gaussian light-source model. Defaults are the fitted constants of the
/// flight-room light source; noise_sigma is the injected sensor noise.
struct SourceParams {
  double a = 399.0;
  double b = -2.6;
  double c = 5.1;
  double noise_sigma = 4.0;
  double normalizer = 399.0;

  void validate() const {
    if (!(a > 0.0)) throw std::invalid_argument("source.a must be > 0");
    if (c == 0.0 || !std::isfinite(c)) throw std::invalid_argument("source.c must be nonzero");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("source.noise_sigma must be >= 0");
    if (!(normalizer > 0.0)) throw std::invalid_argument("source.normalizer must be > 0");
  }
};

/// Noise-free reading a * exp(-(dist - b)^2 / (2 c^2)).
inline double intensity(const SourceParams& p, double dist) {
  if (!(dist >= 0.0)) throw std::domain_error("intensity: negative distance");
  const double z = dist - p.b;
  return p.a * std::exp(-(z * z) / (2.0 * p.c * p.c));
}

/// One noisy reading. Always consumes exactly one normal draw, even when
/// noise_sigma is zero, so the stream position depends only on step count.
inline double sample(const SourceParams& p, double dist, Rng& rng) {
  const double clean = intensity(p, dist);
  const double noise = rng.normal();
  if (p.noise_sigma == 0.0) return clean;
  return clean + p.noise_sigma * noise;
}

/// Maps a raw reading into [0, 1].
inline double normalize(const SourceParams& p, double raw) {
  return std::clamp(raw / p.normalizer, 0.0, 1.0);
}

}  // namespace seek
