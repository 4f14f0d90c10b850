#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "doppler/grid.hpp"
#include "doppler/kinematics.hpp"
#include "doppler/physical_constants.hpp"

// Single-excitation sector of the blip picture: a one-photon state is an
// amplitude psi_{s,lambda}(chi) per channel, and the photon number is the
// summed squared norm. Channels never mix.

namespace doppler {

/// One-photon amplitude per (s, lambda) channel on a shared chi-axis.
class BlipState {
 public:
  /// Throws std::invalid_argument for an empty channel list, duplicate
  /// (s, lambda) channels, mixed axes, or non-PositionChi channels.
  explicit BlipState(std::vector<SampledFunction> channels, PhysicalConstants constants = {});

  const std::vector<SampledFunction>& channels() const noexcept { return channels_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  const Axis& axis() const noexcept { return channels_.front().axis(); }

  bool has_channel(Direction s, Polarization lambda) const noexcept;
  /// Throws std::out_of_range for a missing channel.
  const SampledFunction& channel(Direction s, Polarization lambda) const;

 private:
  std::vector<SampledFunction> channels_;
  PhysicalConstants constants_;
};

/// Momentum-space amplitudes, one MomentumK channel per (s, lambda).
class MomentumBlipState {
 public:
  explicit MomentumBlipState(std::vector<SampledFunction> channels, PhysicalConstants constants = {});

  const std::vector<SampledFunction>& channels() const noexcept { return channels_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  const Axis& axis() const noexcept { return channels_.front().axis(); }

  const SampledFunction& channel(Direction s, Polarization lambda) const;

 private:
  std::vector<SampledFunction> channels_;
  PhysicalConstants constants_;
};

/// The state seen at time t: amplitude at (x, t) is psi(x - s c t). The
/// chi representation itself never changes with t.
class PropagatedBlip {
 public:
  PropagatedBlip(BlipState state, double t) : state_(std::move(state)), t_(t) {}

  double time() const noexcept { return t_; }
  /// Throws std::out_of_range when x - s c t is off the grid.
  Complex operator()(double x, Direction s, Polarization lambda = Polarization::H) const;
  double photon_number() const;

 private:
  BlipState state_;
  double t_;
};

PropagatedBlip propagate_blip(const BlipState& state, double t);

struct BoostedBlip {
  BlipState state;
  ResampleDiagnostics diagnostics;
};

/// psi_B(chi) = sqrt(xi) psi_A(xi chi) per channel, with xi = gamma (1 - s beta).
BoostedBlip boost_blip(const BlipState& state, const BoostParams& boost, const Axis& target);

double photon_number(const BlipState& state);
double photon_number(const MomentumBlipState& state);

MomentumBlipState to_momentum_state(const BlipState& state);
BlipState to_position_state(const MomentumBlipState& state);

struct BoostedMomentumBlip {
  MomentumBlipState state;
  ResampleDiagnostics diagnostics;
};

/// psi~_B(k) = sqrt(kappa) psi~_A(kappa k) per channel on the target k-axis.
/// The result reconstructs onto the chi window starting at `chi_origin`
/// (default: the window centred on zero).
BoostedMomentumBlip boost_momentum_state(const MomentumBlipState& state, const BoostParams& boost,
                                         const Axis& target_k);
BoostedMomentumBlip boost_momentum_state(const MomentumBlipState& state, const BoostParams& boost,
                                         const Axis& target_k, double chi_origin);

/// Sum over channels of dk * |psi~|^2 for grid wave numbers in [k_lo, k_hi].
/// Throws std::invalid_argument for an empty window or one that leaves the k-axis.
double mode_occupation(const MomentumBlipState& state, double k_lo, double k_hi);

/// Fourier multiplier of the blip regularisation kernel
///   R(u) = -sqrt(hbar / (4 pi eps c A)) |u|^{-3/2}
/// on the k-axis conjugate to a chi grid. Convolving c R with psi multiplies
/// psi~ by m(k) = c * prefactor * FT[|u|^{-3/2}](k), where the Hadamard
/// finite-part transform of |u|^{-3/2} is -2 sqrt(2 pi) |k|^{1/2}.
class RegularisationKernel {
 public:
  RegularisationKernel(const Axis& chi_axis, const PhysicalConstants& constants);

  /// -sqrt(hbar / (4 pi eps c A)).
  double prefactor() const noexcept { return prefactor_; }
  const Axis& position_axis() const noexcept { return chi_axis_; }
  const Axis& momentum_axis() const noexcept { return k_axis_; }
  std::span<const Complex> multiplier() const noexcept { return table_; }
  /// m(k) for any k; m(0) = 0.
  Complex multiplier_at(double k) const noexcept;

  /// CSV with header `k,m_re,m_im`.
  void write_csv(std::ostream& out) const;

 private:
  Axis chi_axis_;
  Axis k_axis_;
  double c_;
  double prefactor_;
  std::vector<Complex> table_;
};

/// FT[|u|^{-3/2}](k) / sqrt(|k|) under the Hadamard finite part.
double finite_part_transform_coefficient() noexcept;

/// Vacuum-to-one-photon matrix element of the electric field observable,
/// integral dchi' c R(chi - chi') psi_{s,H}(chi'), evaluated spectrally.
/// Throws std::invalid_argument when the kernel was built for another grid,
/// std::out_of_range when the state has no (s, H) channel.
SampledFunction field_matrix_element(const BlipState& state, Direction s,
                                     const RegularisationKernel& kernel);
SampledFunction field_matrix_element(const BlipState& state, Direction s);

/// Magnetic counterpart: s * field_matrix_element / c.
SampledFunction magnetic_matrix_element(const BlipState& state, Direction s);

struct KernelConsistencyReport {
  /// ‖lhs - rhs‖ / ‖rhs‖ on Bob's grid.
  double discrepancy;
  ResampleDiagnostics diagnostics;
};

/// lhs = field matrix element of the boosted state on Bob's grid;
/// rhs = xi * Alice's field matrix element read at chi / kappa.
/// Uses the (s, H) channel; `target` defaults to the state's own axis.
KernelConsistencyReport kernel_consistency_check(const BlipState& state, const BoostParams& boost,
                                                 Direction s);
KernelConsistencyReport kernel_consistency_check(const BlipState& state, const BoostParams& boost,
                                                 Direction s, const Axis& target);

/// Options for direct quadrature of the finite-part convolution.
struct FinitePartOptions {
  /// psi is taken to vanish outside [support_lo, support_hi].
  double support_lo;
  double support_hi;
  /// Gauss-Legendre panel width along the separation u.
  double panel_width;
};

/// Slow position-space path: integral dchi' c R(chi - chi') psi(chi') with the
/// |u|^{-3/2} singularity taken as a Hadamard finite part,
///   FP integral |u|^{-3/2} psi(chi - u) du
///     = integral_0^inf u^{-3/2} [psi(chi - u) + psi(chi + u) - 2 psi(chi)] du.
/// Independent of the Fourier machinery; used to pin the multiplier.
Complex finite_part_field(const std::function<Complex(double)>& psi, double chi,
                          const FinitePartOptions& options, const PhysicalConstants& constants);

}  // namespace doppler
