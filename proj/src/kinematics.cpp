#include "doppler/kinematics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace doppler {

Direction direction_from_sign(int s) {
  if (s == 1) return Direction::Right;
  if (s == -1) return Direction::Left;
  throw std::invalid_argument("direction flag must be +1 or -1, got " + std::to_string(s));
}

BoostParams make_boost(double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
  if (!(std::abs(beta) < 1.0)) {
    throw std::invalid_argument("superluminal frame: |beta| must be < 1, got " +
                                std::to_string(beta));
  }
  // (1 - beta)(1 + beta) keeps full precision as |beta| -> 1.
  const double gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  return BoostParams(beta, gamma);
}

BoostParams inverse_boost(const BoostParams& boost) {
  return BoostParams(-boost.beta(), boost.gamma());
}

BoostParams compose_boosts(const BoostParams& first, const BoostParams& second) {
  const double b1 = first.beta();
  const double b2 = second.beta();
  double beta = (b1 + b2) / (1.0 + b1 * b2);
  // The exact sum is inside (-1, 1); rounding may still land on the boundary.
  const double edge = std::nextafter(1.0, 0.0);
  if (beta >= 1.0) beta = edge;
  if (beta <= -1.0) beta = -edge;
  return make_boost(beta);
}

double kappa(Direction s, const BoostParams& boost) noexcept {
  return boost.gamma() * (1.0 + sign_of(s) * boost.beta());
}

double xi(Direction s, const BoostParams& boost) noexcept {
  return boost.gamma() * (1.0 - sign_of(s) * boost.beta());
}

LightConeCoord chi_of_event(double x, double t, Direction s, double c) {
  if (!std::isfinite(x) || !std::isfinite(t)) {
    throw std::invalid_argument("event coordinates must be finite");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive");
  return {x - sign_of(s) * c * t, s};
}

LightConeCoord boost_coord(LightConeCoord coord, const BoostParams& boost) noexcept {
  return {kappa(coord.s, boost) * coord.chi, coord.s};
}

SignalExchangeRecord simulate_signal_exchange(const BoostParams& boost, double t_emit_A,
                                              double c) {
  if (!(t_emit_A > 0.0) || !std::isfinite(t_emit_A)) {
    throw std::invalid_argument("emission time must be positive");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive");

  const double beta = boost.beta();
  const double v = beta * c;

  // Alice's frame: pulse x = c (t - t1) from her origin, Bob x = v t.
  const double t_receive_A = c * t_emit_A / (c - v);
  const double x_receive_A = v * t_receive_A;

  // Bob's clock reads the invariant interval from the meeting event at the origin.
  const double ct = c * t_receive_A;
  const double t_receive_B = std::sqrt((ct - x_receive_A) * (ct + x_receive_A)) / c;

  // In Bob's frame the emitter recedes at -v, so the pulse is delayed by (1 + beta).
  const double t_emit_B = t_receive_B / (1.0 + beta);

  SignalExchangeRecord rec{};
  rec.t_emit_A = t_emit_A;
  rec.t_receive_A = t_receive_A;
  rec.t_emit_B = t_emit_B;
  rec.t_receive_B = t_receive_B;
  rec.kappa_measured = t_receive_B / t_emit_A;
  rec.gamma_from_reception = t_receive_A / t_receive_B;
  rec.gamma_from_emission = t_emit_B / t_emit_A;
  rec.delay_residual = std::abs(t_receive_B - (1.0 + beta) * boost.gamma() * t_emit_A);
  rec.causal = t_receive_A >= t_emit_A;
  return rec;
}

}  // namespace doppler
