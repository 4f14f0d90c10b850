#pragma once

#include <optional>
#include <vector>

#include "doppler/grid.hpp"
#include "doppler/kinematics.hpp"
#include "doppler/physical_constants.hpp"

namespace doppler {

/// Electric amplitude of a free classical wave packet, one PositionChi
/// channel per direction, horizontal polarization. The magnetic amplitude
/// is not stored: B = s E / c for a wave travelling in direction s.
class ClassicalWavePacket {
 public:
  /// Channels must share one axis, be PositionChi, H-polarized, and carry
  /// distinct directions. Throws std::invalid_argument otherwise.
  explicit ClassicalWavePacket(std::vector<SampledFunction> channels, double c = 1.0);

  double c() const noexcept { return c_; }
  const Axis& axis() const noexcept { return channels_.front().axis(); }
  const std::vector<SampledFunction>& channels() const noexcept { return channels_; }

  bool has_channel(Direction s) const noexcept;
  /// Throws std::out_of_range if the packet has no channel for s.
  const SampledFunction& electric(Direction s) const;
  SampledFunction magnetic(Direction s) const;

 private:
  std::vector<SampledFunction> channels_;
  double c_;
};

/// E(x, t) = E(x - s c t, 0). Throws std::out_of_range when chi leaves the grid.
Complex evaluate_at(const ClassicalWavePacket& packet, double x, double t, Direction s);

struct BoostedPacket {
  ClassicalWavePacket packet;
  ResampleDiagnostics diagnostics;
};

/// Bob's packet: E_B(chi) = xi * E_A(chi / kappa) per channel, resampled onto `target`.
BoostedPacket boost_packet(const ClassicalWavePacket& packet, const BoostParams& boost,
                           const Axis& target);

/// A bundle of light-like world-lines with chi in [a1, a2] and density h.
struct WorldlineBox {
  double a1;
  double a2;
  double h = 1.0;
  double area = 1.0;
  double epsilon = 1.0;

  /// Throws std::invalid_argument unless a1 < a2 and h, area, epsilon > 0.
  void validate() const;
};

/// The same bundle in Bob's frame: endpoints times kappa, density times xi.
WorldlineBox boost_box(const WorldlineBox& box, Direction s, const BoostParams& boost);

/// (area eps / 2h) * integral over [a1, a2] of (|E|^2 + c^2 |B|^2), summed over
/// the requested channel or all channels. Throws std::out_of_range if the box
/// is not inside the grid.
double box_energy(const ClassicalWavePacket& packet, const WorldlineBox& box,
                  std::optional<Direction> channel = std::nullopt);

struct EnergyResult {
  double energy;
  /// Worst edge-to-peak ratio over channels.
  double edge_ratio;
  /// False when some channel has not decayed to kEdgeDecayLimit at the grid ends.
  bool edge_decay_ok;
};

/// (area eps / 2) * integral over the whole grid of (|E|^2 + c^2 |B|^2); no
/// world-line density enters.
EnergyResult total_energy(const ClassicalWavePacket& packet, double area = 1.0, double epsilon = 1.0);

/// h_B = gamma (1 - s beta) h_A. Throws std::invalid_argument unless h_A > 0.
double transform_density(double h_A, Direction s, const BoostParams& boost);

struct Spectrum {
  SampledFunction amplitude;
  /// |E~|^2-weighted mean wave number; empty for a zero field.
  std::optional<double> centroid;
};

Spectrum spectrum(const ClassicalWavePacket& packet, Direction s);

/// Centroid of |F|^2 over the k-axis, empty when F vanishes.
std::optional<double> spectral_centroid(const SampledFunction& momentum);

/// k_B = gamma (1 - s beta) k_A.
double doppler_shift_wavenumber(double k_A, Direction s, const BoostParams& boost);

struct SpectralTransformReport {
  /// ‖lhs - rhs‖ / ‖rhs‖ over Bob's k-axis.
  double discrepancy;
  ResampleDiagnostics diagnostics;
};

/// Compares the spectrum of the boosted packet with Alice's spectrum read at
/// kappa * k_B. `target` is Bob's chi-axis.
SpectralTransformReport spectral_transform_check(const ClassicalWavePacket& packet,
                                                 const BoostParams& boost, Direction s,
                                                 const Axis& target);

}  // namespace doppler
