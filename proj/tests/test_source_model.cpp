#include <cmath>

#include <gtest/gtest.h>

#include "seek/rng.hpp"
#include "seek/source_model.hpp"

using namespace seek;

TEST(SourceModel, IntensityAtSource) {
  const SourceParams p;
  EXPECT_NEAR(intensity(p, 0.0), 350.36, 0.02);
  EXPECT_NEAR(intensity(p, 0.0), 399.0 * std::exp(-6.76 / 52.02), 1e-9);
}

TEST(SourceModel, IntensityVanishesFarAway) {
  EXPECT_LT(intensity(SourceParams{}, 100.0), 1e-80);
}

TEST(SourceModel, IntensityBelowPeakEverywhere) {
  const SourceParams p;
  for (double d = 0.0; d < 20.0; d += 0.01) EXPECT_LT(intensity(p, d), p.a);
}

TEST(SourceModel, IntensityMonotoneDecreasing) {
  const SourceParams p;
  double prev = intensity(p, 0.0);
  for (double d = 0.05; d < 20.0; d += 0.05) {
    const double v = intensity(p, d);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(SourceModel, NegativeDistanceThrows) {
  EXPECT_THROW(intensity(SourceParams{}, -0.1), std::domain_error);
}

TEST(SourceModel, NoiselessSampleIsExact) {
  SourceParams p;
  p.noise_sigma = 0.0;
  Rng rng(3);
  EXPECT_EQ(sample(p, 0.0, rng), intensity(p, 0.0));
  EXPECT_EQ(sample(p, 2.7, rng), intensity(p, 2.7));
}

TEST(SourceModel, NoiseStatistics) {
  const SourceParams p;
  Rng rng(42);
  const double a = sample(p, 3.0, rng);
  const double b = sample(p, 3.0, rng);
  EXPECT_NE(a, b);

  constexpr int n = 100'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = sample(p, 3.0, rng);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, intensity(p, 3.0), 0.1);
  EXPECT_GE(sd, 3.9);
  EXPECT_LE(sd, 4.1);
}

TEST(SourceModel, Normalize) {
  const SourceParams p;
  EXPECT_DOUBLE_EQ(normalize(p, p.normalizer), 1.0);
  EXPECT_DOUBLE_EQ(normalize(p, -3.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize(p, 199.5), 0.5);
  EXPECT_DOUBLE_EQ(normalize(p, 1e6), 1.0);
}

TEST(SourceModel, ValidateRejectsBadParams) {
  SourceParams p;
  p.noise_sigma = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.normalizer = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
