#include "doppler/classical_field.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doppler/spectral.hpp"

namespace doppler {

ClassicalWavePacket::ClassicalWavePacket(std::vector<SampledFunction> channels, double c)
    : channels_(std::move(channels)), c_(c) {
  if (channels_.empty()) throw std::invalid_argument("a wave packet needs at least one channel");
  if (!std::isfinite(c_) || !(c_ > 0.0)) throw std::invalid_argument("c must be positive");
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const auto& ch = channels_[i];
    if (ch.representation() != Representation::PositionChi) throw std::invalid_argument("packet channels must be in the chi representation");
    if (ch.polarization() != Polarization::H) throw std::invalid_argument("classical packets carry H polarization only");
    if (!ch.axis().matches(channels_.front().axis())) throw std::invalid_argument("packet channels must share one axis");
    for (std::size_t j = 0; j < i; ++j) {
      if (channels_[j].direction() == ch.direction()) throw std::invalid_argument("duplicate direction channel");
    }
  }
}

bool ClassicalWavePacket::has_channel(Direction s) const noexcept {
  return std::any_of(channels_.begin(), channels_.end(), [s](const auto& ch) { return ch.direction() == s; });
}

const SampledFunction& ClassicalWavePacket::electric(Direction s) const {
  for (const auto& ch : channels_) {
    if (ch.direction() == s) return ch;
  }
  throw std::out_of_range(fmt::format("packet has no s = {} channel", static_cast<int>(s)));
}

SampledFunction ClassicalWavePacket::magnetic(Direction s) const {
  return electric(s).scaled(sign_of(s) / c_);
}

Complex evaluate_at(const ClassicalWavePacket& packet, double x, double t, Direction s) {
  const auto coord = chi_of_event(x, t, s, packet.c());
  return interpolate_at(packet.electric(s), coord.chi);
}

BoostedPacket boost_packet(const ClassicalWavePacket& packet, const BoostParams& boost,
                           const Axis& target) {
  std::vector<SampledFunction> out;
  ResampleDiagnostics diag;
  for (const auto& ch : packet.channels()) {
    const double amplitude = xi(ch.direction(), boost);
    // chi_A = chi_B / kappa = xi chi_B
    auto r = resample(ch, amplitude, amplitude, target);
    diag = diag.merged(r.diagnostics);
    out.push_back(std::move(r.function));
  }
  return {ClassicalWavePacket(std::move(out), packet.c()), diag};
}

void WorldlineBox::validate() const {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !(a1 < a2)) throw std::invalid_argument("box needs a1 < a2");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("world-line density must be positive");
  if (!(area > 0.0) || !std::isfinite(area)) throw std::invalid_argument("box area must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("permittivity must be positive");
}

WorldlineBox boost_box(const WorldlineBox& box, Direction s, const BoostParams& boost) {
  const double k = kappa(s, boost);
  return {k * box.a1, k * box.a2, transform_density(box.h, s, boost), box.area, box.epsilon};
}

double box_energy(const ClassicalWavePacket& packet, const WorldlineBox& box,
                  std::optional<Direction> channel) {
  box.validate();
  const Axis& ax = packet.axis();
  if (box.a1 < ax.start() || box.a2 > ax.last()) {
    throw std::out_of_range(fmt::format("box [{}, {}] is not inside the grid [{}, {}]", box.a1, box.a2,
                                        ax.start(), ax.last()));
  }
  const double c2 = packet.c() * packet.c();
  double integral = 0.0;
  for (const auto& ch : packet.channels()) {
    if (channel && ch.direction() != *channel) continue;
    for (std::size_t i = 0; i < ax.count(); ++i) {
      const double chi = ax.point(i);
      if (chi < box.a1 || chi > box.a2) continue;
      const double e2 = std::norm(ch[i]);
      const double b2 = e2 / c2;  // |B|^2 = |E|^2 / c^2
      integral += e2 + c2 * b2;
    }
  }
  return box.area * box.epsilon / (2.0 * box.h) * integral * ax.step();
}

EnergyResult total_energy(const ClassicalWavePacket& packet, double area, double epsilon) {
  EnergyResult r{0.0, 0.0, true};
  double integral = 0.0;
  for (const auto& ch : packet.channels()) {
    const double n = norm(ch);
    integral += 2.0 * n * n;
    r.edge_ratio = std::max(r.edge_ratio, edge_ratio(ch));
  }
  r.energy = area * epsilon / 2.0 * integral;
  r.edge_decay_ok = r.edge_ratio <= kEdgeDecayLimit;
  return r;
}

double transform_density(double h_A, Direction s, const BoostParams& boost) {
  if (!(h_A > 0.0) || !std::isfinite(h_A)) throw std::invalid_argument("world-line density must be positive");
  return xi(s, boost) * h_A;
}

std::optional<double> spectral_centroid(const SampledFunction& momentum) {
  double weight = 0.0;
  double moment = 0.0;
  for (std::size_t m = 0; m < momentum.size(); ++m) {
    const double p = std::norm(momentum[m]);
    weight += p;
    moment += p * momentum.axis().point(m);
  }
  if (weight == 0.0) return std::nullopt;
  return moment / weight;
}

Spectrum spectrum(const ClassicalWavePacket& packet, Direction s) {
  auto amplitude = to_momentum(packet.electric(s));
  auto centroid = spectral_centroid(amplitude);
  return {std::move(amplitude), centroid};
}

double doppler_shift_wavenumber(double k_A, Direction s, const BoostParams& boost) {
  if (!std::isfinite(k_A)) throw std::invalid_argument("wave number must be finite");
  return xi(s, boost) * k_A;
}

SpectralTransformReport spectral_transform_check(const ClassicalWavePacket& packet,
                                                 const BoostParams& boost, Direction s,
                                                 const Axis& target) {
  const auto boosted = boost_packet(packet, boost, target);
  const auto lhs = spectrum(boosted.packet, s).amplitude;
  const auto rhs = resample(spectrum(packet, s).amplitude, kappa(s, boost), 1.0, lhs.axis());
  const double ref = norm(rhs.function);
  const double diff = l2_distance(lhs, rhs.function);
  return {ref > 0.0 ? diff / ref : diff, boosted.diagnostics.merged(rhs.diagnostics)};
}

}  // namespace doppler
