#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "doppler/kinematics.hpp"

namespace doppler {

using Complex = std::complex<double>;

/// Uniform axis: point(i) = start + i * step, 0 <= i < count.
/// The constructor enforces step > 0 and an even count >= 2.
class Axis {
 public:
  Axis(double start, double step, std::size_t count);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }

  double point(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
  double last() const noexcept { return point(count_ - 1); }
  /// count * step, the length of one period of the sampled window.
  double span() const noexcept { return static_cast<double>(count_) * step_; }

  /// Same count, and start/step equal up to rounding of derived axes.
  bool matches(const Axis& other) const noexcept;

 private:
  double start_;
  double step_;
  std::size_t count_;
};

/// Axis of `count` points centred on zero: start = -count/2 * step.
Axis centered_axis(double step, std::size_t count);

enum class Representation { PositionChi, MomentumK };
enum class Polarization { H, V };

const char* to_string(Representation r) noexcept;
const char* to_string(Polarization p) noexcept;
/// "H" or "V"; throws std::invalid_argument otherwise.
Polarization polarization_from_string(const std::string& text);

/// Complex samples on an Axis, tagged with representation, direction and
/// polarization. Immutable after construction.
///
/// For MomentumK functions `conjugate_origin` is the start of the chi
/// window the spectrum was taken over; to_position reconstructs on that
/// window. It is unused for PositionChi functions.
class SampledFunction {
 public:
  SampledFunction(Axis axis, std::vector<Complex> values, Representation rep, Direction s,
                  Polarization lambda = Polarization::H);
  SampledFunction(Axis axis, std::vector<Complex> values, Representation rep, Direction s,
                  Polarization lambda, double conjugate_origin);

  const Axis& axis() const noexcept { return axis_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  Representation representation() const noexcept { return rep_; }
  Direction direction() const noexcept { return s_; }
  Polarization polarization() const noexcept { return lambda_; }
  double conjugate_origin() const noexcept { return conjugate_origin_; }

  /// Same axis and tags, new samples.
  SampledFunction with_values(std::vector<Complex> values) const;
  SampledFunction with_conjugate_origin(double origin) const;
  SampledFunction scaled(Complex factor) const;

 private:
  Axis axis_;
  std::vector<Complex> values_;
  Representation rep_;
  Direction s_;
  Polarization lambda_;
  double conjugate_origin_;
};

/// Samples `fn(point)` on every axis point.
template <typename Fn>
SampledFunction sample(const Axis& axis, Fn&& fn, Representation rep, Direction s,
                       Polarization lambda = Polarization::H) {
  std::vector<Complex> values(axis.count());
  for (std::size_t i = 0; i < axis.count(); ++i) values[i] = Complex(fn(axis.point(i)));
  return SampledFunction(axis, std::move(values), rep, s, lambda);
}

/// step * sum conj(f_i) g_i. Throws std::invalid_argument on axis or tag mismatch.
Complex inner_product(const SampledFunction& f, const SampledFunction& g);

/// sqrt(step * sum |f_i|^2).
double norm(const SampledFunction& f);

/// sqrt(step * sum |f_i - g_i|^2). Throws on axis or tag mismatch.
double l2_distance(const SampledFunction& f, const SampledFunction& g);

/// Largest |f_i|.
double max_abs(const SampledFunction& f);

/// max(|f_0|, |f_last|) / max|f|; 0 for the zero function.
double edge_ratio(const SampledFunction& f);

/// Edge samples must sit this far below the peak for a packet to count as
/// decayed on a finite grid.
inline constexpr double kEdgeDecayLimit = 1e-12;

enum class Interpolation { BandLimited, Cubic };

/// Share of spectral energy a resampling cannot represent above which the
/// band-limit warning is raised.
inline constexpr double kLeakageThreshold = 1e-6;

struct ResampleDiagnostics {
  /// Fraction of spectral energy whose rescaled frequency falls outside the
  /// band of the target axis.
  double leakage_fraction = 0.0;
  /// Fraction of sample energy that maps outside the target window.
  double truncation_fraction = 0.0;
  bool band_limit_warning = false;

  /// Worst case of both.
  ResampleDiagnostics merged(const ResampleDiagnostics& other) const noexcept;
};

struct Resampled {
  SampledFunction function;
  ResampleDiagnostics diagnostics;
};

/// g(x) = amplitude * f(x * scale) on the points of `target`.
///
/// Band-limited mode evaluates the trigonometric interpolant of f through a
/// chirp-z transform. Points whose preimage x * scale falls outside f's
/// sampled window are zero; there is no periodic wrap. For MomentumK input
/// the interpolation band follows the chi window recorded in
/// conjugate_origin, and the output's window is centred on zero.
///
/// Throws std::invalid_argument for zero or non-finite scale.
Resampled resample(const SampledFunction& f, double scale, double amplitude, const Axis& target,
                   Interpolation method = Interpolation::BandLimited);

/// Band-limited value of f at an arbitrary coordinate inside its window.
/// Throws std::out_of_range outside [start, last].
Complex interpolate_at(const SampledFunction& f, double x);

/// CSV with header `coordinate,re,im`, ascending coordinates, 17 significant digits.
void write_csv(std::ostream& out, const SampledFunction& f);
void write_csv(const std::filesystem::path& path, const SampledFunction& f);

/// Reads the CSV written by write_csv. The coordinates must be ascending and
/// uniformly spaced with an even count; throws std::runtime_error otherwise.
SampledFunction read_csv(std::istream& in, Representation rep, Direction s,
                         Polarization lambda = Polarization::H);
SampledFunction read_csv(const std::filesystem::path& path, Representation rep, Direction s,
                         Polarization lambda = Polarization::H);

}  // namespace doppler
