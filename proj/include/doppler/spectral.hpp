#pragma once

#include "doppler/grid.hpp"

// Direction-signed Fourier pair
//   F(k)   = 1/sqrt(2 pi) * integral dchi exp(-i s k chi) f(chi)
//   f(chi) = 1/sqrt(2 pi) * integral dk   exp(+i s k chi) F(k)
// discretised on uniform grids. The k-axis has step 2 pi / (count * step)
// and runs over [-count/2, count/2) steps, so negative wave numbers are
// always present.

namespace doppler {

/// Conjugate k-axis of a chi-axis.
Axis momentum_axis(const Axis& chi_axis);

/// chi-axis with the given origin that is conjugate to a k-axis.
Axis position_axis(const Axis& k_axis, double chi_origin);

/// Throws std::invalid_argument unless f is PositionChi.
SampledFunction to_momentum(const SampledFunction& f);

/// Exact inverse of to_momentum on the chi window recorded in the input.
/// Throws std::invalid_argument unless f is MomentumK.
SampledFunction to_position(const SampledFunction& f);

struct ParsevalReport {
  double position_norm;
  double momentum_norm;
  /// |‖f‖² - ‖F‖²| / ‖f‖², or the absolute difference when f is zero.
  double rel_error;
  /// Set when f was the zero function and rel_error holds an absolute error.
  bool absolute = false;
};

/// Throws std::invalid_argument unless f is PositionChi.
ParsevalReport parseval_check(const SampledFunction& f);

}  // namespace doppler
