#include "doppler/classical_field.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "doppler/spectral.hpp"
#include "oracles.hpp"

namespace doppler {
namespace {

using oracle::Gaussian;

const Axis kGrid = centered_axis(0.02, 16384);

ClassicalWavePacket packet_of(const Gaussian& g, double c = 1.0) {
  return ClassicalWavePacket({sample(kGrid, g, Representation::PositionChi, direction_from_sign(g.s))}, c);
}

TEST(WavePacket, ConstructorValidation) {
  const auto r = sample(kGrid, Gaussian{}, Representation::PositionChi, Direction::Right);
  const auto l = sample(kGrid, Gaussian{}, Representation::PositionChi, Direction::Left);
  EXPECT_NO_THROW(ClassicalWavePacket({r, l}));
  EXPECT_THROW(ClassicalWavePacket({}), std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({r, r}), std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({r}, 0.0), std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({sample(kGrid, Gaussian{}, Representation::PositionChi, Direction::Right,
                                           Polarization::V)}),
               std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({sample(kGrid, Gaussian{}, Representation::MomentumK, Direction::Right)}),
               std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({r, sample(centered_axis(0.01, 16384), Gaussian{}, Representation::PositionChi,
                                              Direction::Left)}),
               std::invalid_argument);
  EXPECT_THROW(ClassicalWavePacket({r}).electric(Direction::Left), std::out_of_range);
}

TEST(WavePacket, MagneticFollowsDirection) {
  const double c = 3.0;
  for (int s : {1, -1}) {
    const auto p = packet_of(Gaussian{0.0, 2.0, 1.0, 1.0, s}, c);
    const auto e = p.electric(direction_from_sign(s));
    const auto b = p.magnetic(direction_from_sign(s));
    for (std::size_t i = 8000; i < 8400; i += 37) EXPECT_EQ(b[i], e[i] * (s / c));
  }
}

TEST(WavePacket, EvaluateAtPropagatesRigidly) {
  for (int s : {1, -1}) {
    Gaussian g{0.0, 2.0, 1.0, 3.0, s};
    const auto p = packet_of(g, 2.0);
    const double t = 1.7;
    for (double x : {-3.0, 0.5, 4.2}) {
      EXPECT_LT(std::abs(evaluate_at(p, x, t, direction_from_sign(s)) - g(x - s * 2.0 * t)), 1e-10);
    }
    EXPECT_THROW(evaluate_at(p, 1000.0, 0.0, direction_from_sign(s)), std::out_of_range);
  }
}

TEST(BoostPacket, MatchesClosedForm) {
  for (double beta : {0.6, -0.6, 0.3}) {
    for (int s : {1, -1}) {
      Gaussian g{1.0, 4.0, 1.0, 10.0, s};
      const auto b = make_boost(beta);
      const double x = xi(direction_from_sign(s), b);
      const auto boosted = boost_packet(packet_of(g), b, kGrid);
      const auto expected = g.rescaled(x, x);
      const auto& e = boosted.packet.electric(direction_from_sign(s));
      double worst = 0.0;
      for (std::size_t i = 0; i < e.size(); ++i) worst = std::max(worst, std::abs(e[i] - expected(e.axis().point(i))));
      EXPECT_LT(worst, 1e-9) << beta << " " << s;
      EXPECT_FALSE(boosted.diagnostics.band_limit_warning);
    }
  }
}

TEST(Doppler, CentroidRatioFollowsAmplitudeFactor) {
  for (double beta : {0.6, 0.5, -0.5}) {
    for (int s : {1, -1}) {
      const auto dir = direction_from_sign(s);
      const auto p = packet_of(Gaussian{0.0, 5.0, 1.0, 20.0, s});
      const auto b = make_boost(beta);
      const auto before = spectrum(p, dir).centroid;
      const auto after = spectrum(boost_packet(p, b, kGrid).packet, dir).centroid;
      ASSERT_TRUE(before && after);
      EXPECT_NEAR(*before, 20.0, 1e-9);
      EXPECT_NEAR(*after / *before, xi(dir, b), 1e-9) << beta << " " << s;
      EXPECT_NEAR(doppler_shift_wavenumber(*before, dir, b), *after, 1e-8);
    }
  }
  EXPECT_NEAR(xi(Direction::Right, make_boost(0.6)), 0.5, 1e-15);
}

TEST(Doppler, CentroidOfZeroFieldIsEmpty) {
  const SampledFunction zero(momentum_axis(kGrid), std::vector<Complex>(kGrid.count()), Representation::MomentumK,
                             Direction::Right);
  EXPECT_FALSE(spectral_centroid(zero).has_value());
}

TEST(Doppler, SpectralTransformLaw) {
  for (double beta : {0.6, -0.4}) {
    for (int s : {1, -1}) {
      const auto p = packet_of(Gaussian{2.0, 5.0, 1.0, 20.0, s});
      const auto r = spectral_transform_check(p, make_boost(beta), direction_from_sign(s), kGrid);
      EXPECT_LT(r.discrepancy, 1e-8) << beta << " " << s;
    }
  }
}

TEST(BoxEnergy, ConservedWithDensityCorrection) {
  for (double beta : {0.6, -0.6, 0.9, -0.3}) {
    for (int s : {1, -1}) {
      const auto dir = direction_from_sign(s);
      const auto b = make_boost(beta);
      const double c = 2.0;
      const auto p = packet_of(Gaussian{0.0, 3.0, 1.5, 5.0, s}, c);
      const WorldlineBox box{-36.0, 36.0, 1.7, 2.0, 0.5};
      const auto bob_box = boost_box(box, dir, b);
      EXPECT_NEAR(bob_box.a1, kappa(dir, b) * box.a1, 1e-12);
      EXPECT_NEAR(bob_box.h * (bob_box.a2 - bob_box.a1), box.h * (box.a2 - box.a1), 1e-10);
      const auto bob = boost_packet(p, b, kGrid).packet;
      const double e_a = box_energy(p, box);
      const double e_b = box_energy(bob, bob_box);
      EXPECT_NEAR(e_b / e_a, 1.0, 1e-9) << beta << " " << s;
      auto naive = bob_box;
      naive.h = box.h;
      EXPECT_NEAR(box_energy(bob, naive) / e_a, xi(dir, b), 1e-9) << beta << " " << s;
    }
  }
}

TEST(BoxEnergy, MatchesClosedForm) {
  Gaussian g{0.0, 3.0, 1.5, 5.0, 1};
  const auto p = packet_of(g, 2.0);
  const WorldlineBox box{-40.0, 40.0, 1.7, 2.0, 0.5};
  // (A eps / 2h) * 2 * integral |E|^2
  const double expected = 2.0 * 0.5 / (2.0 * 1.7) * 2.0 * g.norm2();
  EXPECT_NEAR(box_energy(p, box), expected, 1e-12 * expected);
  EXPECT_NEAR(box_energy(p, box, Direction::Right), expected, 1e-12 * expected);
  EXPECT_EQ(box_energy(p, box, Direction::Left), 0.0);
}

TEST(BoxEnergy, ErrorPaths) {
  const auto p = packet_of(Gaussian{});
  EXPECT_THROW(box_energy(p, WorldlineBox{1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(box_energy(p, WorldlineBox{-1.0, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(box_energy(p, WorldlineBox{-1.0, 1.0, 1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(box_energy(p, WorldlineBox{-500.0, 1.0}), std::out_of_range);
  EXPECT_THROW(transform_density(0.0, Direction::Right, make_boost(0.1)), std::invalid_argument);
  EXPECT_THROW(doppler_shift_wavenumber(std::nan(""), Direction::Right, make_boost(0.1)), std::invalid_argument);
}

TEST(TotalEnergy, ScalesWithAmplitudeFactor) {
  for (int s : {1, -1}) {
    const auto dir = direction_from_sign(s);
    const auto b = make_boost(0.6);
    const auto p = packet_of(Gaussian{0.0, 5.0, 1.0, 20.0, s});
    const auto e_a = total_energy(p);
    const auto e_b = total_energy(boost_packet(p, b, kGrid).packet);
    EXPECT_TRUE(e_a.edge_decay_ok);
    EXPECT_TRUE(e_b.edge_decay_ok);
    EXPECT_NEAR(e_b.energy / e_a.energy, xi(dir, b), 1e-9);
  }
}

TEST(TotalEnergy, FlagsUndecayedEdges) {
  const auto p = packet_of(Gaussian{0.0, 60.0, 1.0, 0.0, 1});
  EXPECT_FALSE(total_energy(p).edge_decay_ok);
}

}  // namespace
}  // namespace doppler
