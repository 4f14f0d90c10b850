#include "doppler/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

namespace doppler {
namespace {

using oracle::Gaussian;

TEST(Axes, MomentumAxisIsConjugate) {
  const auto chi = centered_axis(0.02, 16384);
  const auto k = momentum_axis(chi);
  EXPECT_EQ(k.count(), chi.count());
  EXPECT_NEAR(k.step(), 2.0 * std::numbers::pi / (16384 * 0.02), 1e-15);
  EXPECT_NEAR(k.start(), -8192 * k.step(), 1e-12);
  const auto back = position_axis(k, chi.start());
  EXPECT_TRUE(back.matches(chi));
}

class SpectralBothDirections : public ::testing::TestWithParam<int> {};

TEST_P(SpectralBothDirections, GaussianSpectrumMatchesClosedForm) {
  const int s = GetParam();
  Gaussian g{0.7, 1.2, 0.9, 4.0, s};
  const Axis chi(-20.0, 0.04, 1000);
  const auto f = sample(chi, g, Representation::PositionChi, direction_from_sign(s));
  const auto F = to_momentum(f);
  EXPECT_EQ(F.representation(), Representation::MomentumK);
  EXPECT_EQ(F.conjugate_origin(), chi.start());
  double worst = 0.0;
  for (std::size_t m = 0; m < F.size(); ++m) worst = std::max(worst, std::abs(F[m] - g.momentum(F.axis().point(m))));
  EXPECT_LT(worst, 1e-12);
}

TEST_P(SpectralBothDirections, RoundTripAndParseval) {
  const Direction s = direction_from_sign(GetParam());
  std::mt19937_64 rng(99 + GetParam());
  std::normal_distribution<double> nd;
  for (std::size_t n : {16u, 256u, 1000u, 4096u}) {
    const Axis chi(-3.3, 0.07, n);
    std::vector<Complex> v(n);
    for (auto& z : v) z = {nd(rng), nd(rng)};
    const SampledFunction f(chi, v, Representation::PositionChi, s);
    const auto back = to_position(to_momentum(f));
    EXPECT_TRUE(back.axis().matches(chi));
    EXPECT_EQ(back.direction(), s);
    EXPECT_LT(l2_distance(f, back) / norm(f), 1e-10) << n;
    const auto report = parseval_check(f);
    EXPECT_LT(report.rel_error, 1e-10) << n;
    EXPECT_FALSE(report.absolute);
  }
}

INSTANTIATE_TEST_SUITE_P(Directions, SpectralBothDirections, ::testing::Values(1, -1));

TEST(Spectral, DirectionFlipsTheSpectrum) {
  Gaussian g{0.0, 1.0, 1.0, 3.0, 1};
  const auto chi = centered_axis(0.05, 512);
  auto right = to_momentum(sample(chi, g, Representation::PositionChi, Direction::Right));
  auto left = to_momentum(sample(chi, g, Representation::PositionChi, Direction::Left));
  // The same chi profile under the opposite sign has its spectrum mirrored: F_-(k) = F_+(-k).
  for (std::size_t m = 1; m < chi.count(); ++m) {
    EXPECT_LT(std::abs(left[m] - right[chi.count() - m]), 1e-12);
  }
}

TEST(Spectral, PlaneWaveLandsOnOneBin) {
  const auto chi = centered_axis(0.1, 128);
  const auto k = momentum_axis(chi);
  const double k0 = k.point(64 + 10);
  const auto f = sample(chi, [&](double x) { return std::polar(1.0, k0 * x); }, Representation::PositionChi,
                        Direction::Right);
  const auto F = to_momentum(f);
  for (std::size_t m = 0; m < F.size(); ++m) {
    if (m == 74) {
      EXPECT_NEAR(std::abs(F[m]), chi.span() / std::sqrt(2.0 * std::numbers::pi), 1e-10);
    } else {
      EXPECT_LT(std::abs(F[m]), 1e-11);
    }
  }
}

TEST(Spectral, ZeroFunctionParsevalIsAbsolute) {
  const SampledFunction zero(centered_axis(0.1, 8), std::vector<Complex>(8), Representation::PositionChi,
                             Direction::Right);
  const auto report = parseval_check(zero);
  EXPECT_TRUE(report.absolute);
  EXPECT_EQ(report.rel_error, 0.0);
}

TEST(Spectral, RejectsWrongRepresentation) {
  const auto f = sample(centered_axis(0.1, 8), [](double) { return 1.0; }, Representation::MomentumK,
                        Direction::Right);
  EXPECT_THROW(to_momentum(f), std::invalid_argument);
  EXPECT_THROW(parseval_check(f), std::invalid_argument);
  const auto p = sample(centered_axis(0.1, 8), [](double) { return 1.0; }, Representation::PositionChi,
                        Direction::Right);
  EXPECT_THROW(to_position(p), std::invalid_argument);
}

}  // namespace
}  // namespace doppler
