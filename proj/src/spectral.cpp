#include "doppler/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"

namespace doppler {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrtTwoPi = 1.0 / std::sqrt(kTwoPi);

// Index of wave number k_m = (m - n/2) dk in an unshifted DFT array.
std::size_t dft_slot(std::size_t m, std::size_t n) { return (m + n / 2) % n; }

// exp(-i s k_m x0) with k_m x0 = 2 pi (m - n/2) x0 / (n h), reduced before scaling.
Complex origin_phase(std::size_t m, std::size_t n, double origin_over_step, double s) {
  const double cycles = (static_cast<double>(m) - static_cast<double>(n / 2)) * origin_over_step;
  const double reduced = std::fmod(cycles, static_cast<double>(n));
  return std::polar(1.0, -s * kTwoPi * reduced / static_cast<double>(n));
}

}  // namespace

Axis momentum_axis(const Axis& chi_axis) {
  const double dk = kTwoPi / chi_axis.span();
  return centered_axis(dk, chi_axis.count());
}

Axis position_axis(const Axis& k_axis, double chi_origin) {
  return Axis(chi_origin, kTwoPi / k_axis.span(), k_axis.count());
}

SampledFunction to_momentum(const SampledFunction& f) {
  if (f.representation() != Representation::PositionChi) {
    throw std::invalid_argument("to_momentum needs a position-representation function");
  }
  const Axis& chi = f.axis();
  const std::size_t n = chi.count();
  const double s = sign_of(f.direction());
  const auto dft = detail::fft(f.values(), f.direction() == Direction::Right ? detail::FftSign::Negative
                                                                             : detail::FftSign::Positive);
  const double origin_over_step = chi.start() / chi.step();
  const double weight = chi.step() * kInvSqrtTwoPi;

  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    out[m] = weight * origin_phase(m, n, origin_over_step, s) * dft[dft_slot(m, n)];
  }
  return SampledFunction(momentum_axis(chi), std::move(out), Representation::MomentumK, f.direction(),
                         f.polarization(), chi.start());
}

SampledFunction to_position(const SampledFunction& f) {
  if (f.representation() != Representation::MomentumK) {
    throw std::invalid_argument("to_position needs a momentum-representation function");
  }
  const Axis chi = position_axis(f.axis(), f.conjugate_origin());
  const std::size_t n = chi.count();
  const double s = sign_of(f.direction());
  const double origin_over_step = chi.start() / chi.step();

  std::vector<Complex> shifted(n);
  for (std::size_t m = 0; m < n; ++m) {
    shifted[dft_slot(m, n)] = f[m] * std::conj(origin_phase(m, n, origin_over_step, s));
  }
  const auto dft = detail::fft(shifted, f.direction() == Direction::Right ? detail::FftSign::Positive
                                                                          : detail::FftSign::Negative);
  const double weight = f.axis().step() * kInvSqrtTwoPi;
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = weight * dft[j];
  return SampledFunction(chi, std::move(out), Representation::PositionChi, f.direction(), f.polarization());
}

ParsevalReport parseval_check(const SampledFunction& f) {
  const auto spectrum = to_momentum(f);
  ParsevalReport r{};
  r.position_norm = norm(f);
  r.momentum_norm = norm(spectrum);
  const double p2 = r.position_norm * r.position_norm;
  const double m2 = r.momentum_norm * r.momentum_norm;
  if (p2 == 0.0) {
    r.rel_error = std::abs(m2);
    r.absolute = true;
  } else {
    r.rel_error = std::abs(p2 - m2) / p2;
  }
  return r;
}

}  // namespace doppler
