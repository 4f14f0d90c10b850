#pragma once

// Boosts along x, light-cone coordinates chi = x - s c t, and the radar
// (signal-exchange) reenactment that fixes the coordinate ratio kappa.

namespace doppler {

/// Direction of propagation along x. The numeric value is the sign s.
enum class Direction : int { Left = -1, Right = 1 };

constexpr double sign_of(Direction s) noexcept {
  return static_cast<double>(static_cast<int>(s));
}

constexpr Direction opposite(Direction s) noexcept {
  return s == Direction::Right ? Direction::Left : Direction::Right;
}

/// Converts +1 / -1 to a Direction; anything else throws std::invalid_argument.
Direction direction_from_sign(int s);

/// Relative velocity of Bob's frame as a fraction of c, with the Lorentz
/// factor cached at construction. Only make_boost / inverse_boost /
/// compose_boosts create instances, so |beta| < 1 always holds.
class BoostParams {
 public:
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

 private:
  BoostParams(double beta, double gamma) noexcept : beta_(beta), gamma_(gamma) {}

  friend BoostParams make_boost(double beta);
  friend BoostParams inverse_boost(const BoostParams& boost);

  double beta_;
  double gamma_;
};

/// Throws std::invalid_argument for non-finite beta or |beta| >= 1.
BoostParams make_boost(double beta);

/// Same frame pair seen from the other side: beta -> -beta, gamma unchanged.
BoostParams inverse_boost(const BoostParams& boost);

/// Relativistic velocity addition (beta1 + beta2) / (1 + beta1 beta2).
BoostParams compose_boosts(const BoostParams& first, const BoostParams& second);

/// chi_B / chi_A along one light-like world-line: gamma (1 + s beta).
double kappa(Direction s, const BoostParams& boost) noexcept;

/// E_B / E_A at one spacetime point: gamma (1 - s beta) = 1 / kappa.
double xi(Direction s, const BoostParams& boost) noexcept;

struct LightConeCoord {
  double chi;
  Direction s;
};

/// chi = x - s c t. Requires finite x, t and c > 0.
LightConeCoord chi_of_event(double x, double t, Direction s, double c = 1.0);

/// Maps Alice's chi to Bob's chi; the direction never changes under a boost.
LightConeCoord boost_coord(LightConeCoord coord, const BoostParams& boost) noexcept;

/// Times of Alice's radar pulse as seen by both observers. Both start at
/// their own origins and coincide at t_A = t_B = 0.
///
/// t_receive_A comes from intersecting the pulse world-line with Bob's,
/// t_receive_B from the proper time elapsed on Bob's world-line, and
/// t_emit_B from Bob's own delay argument t_receive_B = (1 + beta) t_emit_B.
/// For beta < 0 the intersection lies on the backward extension of the
/// pulse world-line, so `causal` is false but the ratios remain valid.
struct SignalExchangeRecord {
  double t_emit_A;
  double t_receive_A;
  double t_emit_B;
  double t_receive_B;
  double kappa_measured;
  /// t_receive_A / t_receive_B (clock dilation at reception).
  double gamma_from_reception;
  /// t_emit_B / t_emit_A (clock dilation at emission).
  double gamma_from_emission;
  /// |t_receive_B - (1 + beta) gamma t_emit_A|, using the cached gamma.
  double delay_residual;
  bool causal;
};

/// Throws std::invalid_argument unless t_emit_A > 0 and c > 0.
SignalExchangeRecord simulate_signal_exchange(const BoostParams& boost, double t_emit_A,
                                              double c = 1.0);

}  // namespace doppler
