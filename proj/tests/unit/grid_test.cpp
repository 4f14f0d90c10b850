#include "doppler/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"

namespace doppler {
namespace {

using oracle::Gaussian;

double max_error(const SampledFunction& f, const Gaussian& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - g(f.axis().point(i))));
  return worst;
}

SampledFunction sampled(const Axis& ax, const Gaussian& g, Direction s = Direction::Right) {
  return sample(ax, g, Representation::PositionChi, s);
}

TEST(Axis, Validation) {
  EXPECT_THROW(Axis(0.0, 0.0, 8), std::invalid_argument);
  EXPECT_THROW(Axis(0.0, -1.0, 8), std::invalid_argument);
  EXPECT_THROW(Axis(0.0, 1.0, 7), std::invalid_argument);
  EXPECT_THROW(Axis(0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(Axis(std::nan(""), 1.0, 8), std::invalid_argument);
  const Axis ax(-1.0, 0.25, 8);
  EXPECT_DOUBLE_EQ(ax.last(), 0.75);
  EXPECT_DOUBLE_EQ(ax.span(), 2.0);
}

TEST(Axis, CenteredAndMatches) {
  const auto ax = centered_axis(0.5, 16);
  EXPECT_DOUBLE_EQ(ax.start(), -4.0);
  EXPECT_TRUE(ax.matches(Axis(-4.0 + 1e-13, 0.5 * (1.0 + 1e-14), 16)));
  EXPECT_FALSE(ax.matches(Axis(-4.0, 0.5, 18)));
  EXPECT_FALSE(ax.matches(Axis(-3.5, 0.5, 16)));
  EXPECT_FALSE(ax.matches(Axis(-4.0, 0.51, 16)));
}

TEST(Tags, PolarizationParsing) {
  EXPECT_EQ(polarization_from_string("H"), Polarization::H);
  EXPECT_EQ(polarization_from_string("V"), Polarization::V);
  EXPECT_THROW(polarization_from_string("X"), std::invalid_argument);
  EXPECT_STREQ(to_string(Representation::MomentumK), "momentum_k");
}

TEST(SampledFunction, RejectsSizeMismatch) {
  EXPECT_THROW(SampledFunction(centered_axis(1.0, 4), std::vector<Complex>(3), Representation::PositionChi,
                               Direction::Right),
               std::invalid_argument);
}

TEST(SampledFunction, NormOfGaussian) {
  Gaussian g{0.3, 1.5, 2.0, 4.0, 1};
  const auto f = sampled(centered_axis(0.05, 1024), g);
  EXPECT_NEAR(norm(f) * norm(f), g.norm2(), 1e-12 * g.norm2());
  EXPECT_NEAR(max_abs(f), 2.0, 1e-3);
  EXPECT_LT(edge_ratio(f), 1e-30);
}

TEST(SampledFunction, InnerProductChecksTags) {
  const auto ax = centered_axis(0.1, 64);
  Gaussian g{0.0, 1.0, 1.0, 0.0, 1};
  const auto r = sampled(ax, g, Direction::Right);
  const auto l = sampled(ax, g, Direction::Left);
  EXPECT_THROW(inner_product(r, l), std::invalid_argument);
  EXPECT_THROW(l2_distance(r, sampled(centered_axis(0.2, 64), g)), std::invalid_argument);
  EXPECT_NEAR(inner_product(r, r).real(), norm(r) * norm(r), 1e-14);
}

TEST(SampledFunction, InnerProductIsConjugateSymmetricAndLinear) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const auto ax = centered_axis(0.1, 32);
  auto random_fn = [&] {
    std::vector<Complex> v(ax.count());
    for (auto& z : v) z = {nd(rng), nd(rng)};
    return SampledFunction(ax, v, Representation::PositionChi, Direction::Right);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_fn();
    const auto g = random_fn();
    const auto h = random_fn();
    const Complex a{nd(rng), nd(rng)};
    EXPECT_LT(std::abs(inner_product(f, g) - std::conj(inner_product(g, f))), 1e-12);
    std::vector<Complex> combo(ax.count());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * g[i] + h[i];
    const auto lhs = inner_product(f, f.with_values(combo));
    const auto rhs = a * inner_product(f, g) + inner_product(f, h);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * (1.0 + std::abs(rhs)));
  }
}

TEST(Resample, GaussianCompressionMatchesClosedForm) {
  const auto ax = centered_axis(0.05, 1024);
  Gaussian g{1.0, 2.0, 1.0, 3.0, 1};
  const auto r = resample(sampled(ax, g), 2.0, 1.5, ax);
  EXPECT_LT(max_error(r.function, g.rescaled(2.0, 1.5)), 1e-9);
  EXPECT_FALSE(r.diagnostics.band_limit_warning);
}

TEST(Resample, GaussianStretchMatchesClosedForm) {
  const auto ax = centered_axis(0.05, 1024);
  Gaussian g{-0.5, 1.0, 1.0, 5.0, -1};
  const auto r = resample(sampled(ax, g, Direction::Left), 0.5, 1.0, ax);
  EXPECT_LT(max_error(r.function, g.rescaled(0.5, 1.0)), 1e-9);
  EXPECT_LT(r.diagnostics.leakage_fraction, 1e-12);
}

TEST(Resample, ShiftedTargetAndOffGridPoints) {
  const auto ax = centered_axis(0.05, 1024);
  Gaussian g{0.0, 1.5, 1.0, 2.0, 1};
  const Axis target(-7.013, 0.031, 600);
  const auto r = resample(sampled(ax, g), 1.3, 1.0, target);
  EXPECT_LT(max_error(r.function, g.rescaled(1.3, 1.0)), 1e-9);
}

TEST(Resample, IdentityReproducesSamples) {
  const auto ax = centered_axis(0.1, 256);
  Gaussian g{0.2, 1.0, 1.0, 1.0, 1};
  const auto f = sampled(ax, g);
  const auto r = resample(f, 1.0, 1.0, ax);
  EXPECT_LT(l2_distance(f, r.function), 1e-12);
}

TEST(Resample, OutsideWindowIsZero) {
  const auto ax = centered_axis(0.1, 64);
  const auto f = sampled(ax, Gaussian{0.0, 1.0, 1.0, 0.0, 1});
  const Axis far(100.0, 0.1, 8);
  const auto r = resample(f, 1.0, 1.0, far);
  EXPECT_EQ(max_abs(r.function), 0.0);
}

TEST(Resample, ReportsTruncation) {
  const auto ax = centered_axis(0.1, 128);
  const auto f = sampled(ax, Gaussian{0.0, 2.0, 1.0, 0.0, 1});
  // Stretching by 4 pushes most of the packet off the target window.
  const auto r = resample(f, 0.25, 1.0, ax);
  EXPECT_GT(r.diagnostics.truncation_fraction, 0.1);
  EXPECT_TRUE(r.diagnostics.band_limit_warning);
}

TEST(Resample, ReportsLeakage) {
  const auto ax = centered_axis(0.05, 1024);
  // Carrier at 40 compressed by 2 exceeds the Nyquist wave number of ~62.8.
  const auto f = sampled(ax, Gaussian{0.0, 1.0, 1.0, 40.0, 1});
  const auto r = resample(f, 2.0, 1.0, ax);
  EXPECT_GT(r.diagnostics.leakage_fraction, 0.5);
  EXPECT_TRUE(r.diagnostics.band_limit_warning);
}

TEST(Resample, RejectsBadScale) {
  const auto f = sampled(centered_axis(0.1, 16), Gaussian{});
  EXPECT_THROW(resample(f, 0.0, 1.0, f.axis()), std::invalid_argument);
  EXPECT_THROW(resample(f, std::nan(""), 1.0, f.axis()), std::invalid_argument);
}

TEST(Resample, CubicIsCloseButLessAccurate) {
  const auto ax = centered_axis(0.05, 1024);
  Gaussian g{0.0, 2.0, 1.0, 1.0, 1};
  const auto f = sampled(ax, g);
  const auto cubic = resample(f, 1.7, 1.0, ax, Interpolation::Cubic);
  const auto band = resample(f, 1.7, 1.0, ax);
  const double e_cubic = max_error(cubic.function, g.rescaled(1.7, 1.0));
  EXPECT_LT(e_cubic, 1e-3);
  EXPECT_LT(max_error(band.function, g.rescaled(1.7, 1.0)), e_cubic);
}

TEST(InterpolateAt, MatchesClosedFormBetweenSamples) {
  const auto ax = centered_axis(0.05, 512);
  Gaussian g{0.1, 1.0, 1.0, 6.0, -1};
  const auto f = sampled(ax, g, Direction::Left);
  for (double x : {-2.3456, 0.0123, 1.00001, 3.3}) EXPECT_LT(std::abs(interpolate_at(f, x) - g(x)), 1e-10) << x;
  EXPECT_THROW(interpolate_at(f, 100.0), std::out_of_range);
}

TEST(Csv, RoundTripIsExact) {
  const auto f = sampled(Axis(-1.5, 0.1, 30), Gaussian{0.0, 0.4, 1.0, 3.0, 1}, Direction::Left);
  std::stringstream ss;
  write_csv(ss, f);
  const auto g = read_csv(ss, Representation::PositionChi, Direction::Left);
  ASSERT_EQ(g.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(g[i], f[i]);
  EXPECT_TRUE(g.axis().matches(f.axis()));
}

TEST(Csv, RejectsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_csv(in, Representation::PositionChi, Direction::Right);
  };
  EXPECT_THROW(parse(""), std::runtime_error);
  EXPECT_THROW(parse("x,y,z\n0,1,0\n1,1,0\n"), std::runtime_error);
  EXPECT_THROW(parse("coordinate,re,im\n0,1,0\n1,1,0\n2,1,0\n"), std::runtime_error);
  EXPECT_THROW(parse("coordinate,re,im\n0,1,0\n1,abc,0\n"), std::runtime_error);
  EXPECT_THROW(parse("coordinate,re,im\n0,1,0\n1,1,0\n2.5,1,0\n3.5,1,0\n"), std::runtime_error);
  EXPECT_THROW(parse("coordinate,re,im\n1,1,0\n0,1,0\n"), std::runtime_error);
  EXPECT_NO_THROW(parse("coordinate,re,im\n0,1,0\n1,1,0\n"));
}

}  // namespace
}  // namespace doppler
