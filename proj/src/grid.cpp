#include "doppler/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"

namespace doppler {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(2 pi i * cycles / period), reducing the argument first so that large
// products keep their phase accuracy.
Complex unit_phase(double cycles, double period) {
  const double reduced = std::fmod(cycles, period);
  return std::polar(1.0, kTwoPi * reduced / period);
}

long positive_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

void require_compatible(const SampledFunction& f, const SampledFunction& g) {
  if (!f.axis().matches(g.axis())) throw std::invalid_argument("sampled functions live on different axes");
  if (f.representation() != g.representation() || f.direction() != g.direction() ||
      f.polarization() != g.polarization()) {
    throw std::invalid_argument("sampled functions carry different representation/direction/polarization tags");
  }
}

// First DFT index of the band the samples are interpolated over. Position
// functions use the symmetric band; momentum functions use the band that
// covers the chi window they were transformed from.
long band_start(const SampledFunction& f) {
  const long n = static_cast<long>(f.size());
  if (f.representation() == Representation::PositionChi) return -n / 2;
  const double chi_step = kTwoPi / (static_cast<double>(n) * f.axis().step());
  const long origin_index = std::lround(f.conjugate_origin() / chi_step);
  return f.direction() == Direction::Right ? -origin_index - n + 1 : origin_index;
}

// Values of the trigonometric interpolant at fractional indices u0 + m du,
// m = 0..count-1, via Bluestein's chirp-z factorisation
// n m = (n^2 + m^2 - (m - n)^2) / 2.
std::vector<Complex> chirp_interpolate(std::span<const Complex> spectrum, long nu0, double u0,
                                       double du, std::size_t count) {
  const std::size_t n = spectrum.size();
  const long ln = static_cast<long>(n);
  const double dn = static_cast<double>(n);
  const std::size_t len = detail::fast_fft_size(n + count - 1);

  std::vector<Complex> a(len, Complex{});
  for (std::size_t j = 0; j < n; ++j) {
    const long nu = nu0 + static_cast<long>(j);
    const double jj = static_cast<double>(j);
    const Complex shift = unit_phase(static_cast<double>(nu) * u0, dn);
    const Complex chirp = unit_phase(du * jj * jj, 2.0 * dn);
    a[j] = spectrum[static_cast<std::size_t>(positive_mod(nu, ln))] * shift * chirp / dn;
  }

  std::vector<Complex> b(len, Complex{});
  for (std::size_t l = 0; l < count; ++l) {
    const double ll = static_cast<double>(l);
    b[l] = unit_phase(-du * ll * ll, 2.0 * dn);
  }
  for (std::size_t l = 1; l < n; ++l) {
    const double ll = static_cast<double>(l);
    b[len - l] = unit_phase(-du * ll * ll, 2.0 * dn);
  }

  auto fa = detail::fft(a, detail::FftSign::Negative);
  const auto fb = detail::fft(b, detail::FftSign::Negative);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  const auto conv = detail::fft(fa, detail::FftSign::Positive);

  std::vector<Complex> out(count);
  const double dlen = static_cast<double>(len);
  for (std::size_t m = 0; m < count; ++m) {
    const double mm = static_cast<double>(m);
    const Complex chirp = unit_phase(du * mm * mm, 2.0 * dn);
    const Complex shift = unit_phase(static_cast<double>(nu0) * du * mm, dn);
    out[m] = shift * chirp * conv[m] / dlen;
  }
  return out;
}

double keys_cubic(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

Complex cubic_at(std::span<const Complex> v, double u) {
  const long n = static_cast<long>(v.size());
  const long base = static_cast<long>(std::floor(u));
  Complex acc{};
  for (long i = base - 1; i <= base + 2; ++i) {
    if (i < 0 || i >= n) continue;
    acc += v[static_cast<std::size_t>(i)] * keys_cubic(u - static_cast<double>(i));
  }
  return acc;
}

}  // namespace

Axis::Axis(double start, double step, std::size_t count) : start_(start), step_(step), count_(count) {
  if (!std::isfinite(start) || !std::isfinite(step)) throw std::invalid_argument("axis start and step must be finite");
  if (!(step > 0.0)) throw std::invalid_argument("axis step must be positive");
  if (count < 2) throw std::invalid_argument("axis needs at least 2 points");
  if (count % 2 != 0) throw std::invalid_argument(fmt::format("axis count must be even, got {}", count));
}

bool Axis::matches(const Axis& other) const noexcept {
  return count_ == other.count_ && std::abs(step_ - other.step_) <= 1e-12 * step_ &&
         std::abs(start_ - other.start_) <= 1e-9 * step_;
}

Axis centered_axis(double step, std::size_t count) {
  return Axis(-static_cast<double>(count / 2) * step, step, count);
}

const char* to_string(Representation r) noexcept {
  return r == Representation::PositionChi ? "position_chi" : "momentum_k";
}

const char* to_string(Polarization p) noexcept { return p == Polarization::H ? "H" : "V"; }

Polarization polarization_from_string(const std::string& text) {
  if (text == "H") return Polarization::H;
  if (text == "V") return Polarization::V;
  throw std::invalid_argument("polarization must be H or V, got '" + text + "'");
}

SampledFunction::SampledFunction(Axis axis, std::vector<Complex> values, Representation rep,
                                 Direction s, Polarization lambda)
    : SampledFunction(axis, std::move(values), rep, s, lambda,
                      -static_cast<double>(axis.count() / 2) *
                          (kTwoPi / (static_cast<double>(axis.count()) * axis.step()))) {}

SampledFunction::SampledFunction(Axis axis, std::vector<Complex> values, Representation rep,
                                 Direction s, Polarization lambda, double conjugate_origin)
    : axis_(axis),
      values_(std::move(values)),
      rep_(rep),
      s_(s),
      lambda_(lambda),
      conjugate_origin_(conjugate_origin) {
  if (values_.size() != axis_.count()) {
    throw std::invalid_argument(
        fmt::format("{} samples for an axis of {} points", values_.size(), axis_.count()));
  }
}

SampledFunction SampledFunction::with_values(std::vector<Complex> values) const {
  return SampledFunction(axis_, std::move(values), rep_, s_, lambda_, conjugate_origin_);
}

SampledFunction SampledFunction::with_conjugate_origin(double origin) const {
  return SampledFunction(axis_, values_, rep_, s_, lambda_, origin);
}

SampledFunction SampledFunction::scaled(Complex factor) const {
  std::vector<Complex> v(values_);
  for (auto& x : v) x *= factor;
  return with_values(std::move(v));
}

Complex inner_product(const SampledFunction& f, const SampledFunction& g) {
  require_compatible(f, g);
  Complex acc{};
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::conj(f[i]) * g[i];
  return acc * f.axis().step();
}

double norm(const SampledFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.axis().step());
}

double l2_distance(const SampledFunction& f, const SampledFunction& g) {
  require_compatible(f, g);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::norm(f[i] - g[i]);
  return std::sqrt(acc * f.axis().step());
}

double max_abs(const SampledFunction& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double edge_ratio(const SampledFunction& f) {
  const double peak = max_abs(f);
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(f[0]), std::abs(f[f.size() - 1])) / peak;
}

ResampleDiagnostics ResampleDiagnostics::merged(const ResampleDiagnostics& other) const noexcept {
  return {std::max(leakage_fraction, other.leakage_fraction),
          std::max(truncation_fraction, other.truncation_fraction),
          band_limit_warning || other.band_limit_warning};
}

Resampled resample(const SampledFunction& f, double scale, double amplitude, const Axis& target,
                   Interpolation method) {
  if (!std::isfinite(scale) || scale == 0.0) throw std::invalid_argument("resample scale must be finite and non-zero");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("resample amplitude must be finite");

  const Axis& src = f.axis();
  const std::size_t n = src.count();
  const std::size_t m = target.count();
  const double u0 = (scale * target.start() - src.start()) / src.step();
  const double du = scale * target.step() / src.step();

  const auto spectrum = detail::fft(f.values(), detail::FftSign::Negative);
  const long nu0 = band_start(f);

  ResampleDiagnostics diag;
  {
    double total = 0.0;
    double outside = 0.0;
    const double half = static_cast<double>(m / 2);
    for (std::size_t j = 0; j < n; ++j) {
      const long nu = nu0 + static_cast<long>(j);
      const double e = std::norm(spectrum[static_cast<std::size_t>(positive_mod(nu, static_cast<long>(n)))]);
      total += e;
      const double nu_target = static_cast<double>(nu) * du * static_cast<double>(m) / static_cast<double>(n);
      if (nu_target < -half || nu_target >= half) outside += e;
    }
    diag.leakage_fraction = total > 0.0 ? outside / total : 0.0;

    double mass = 0.0;
    double lost = 0.0;
    const double lo = std::min(target.start(), target.last());
    const double hi = std::max(target.start(), target.last());
    const double slack = 1e-9 * target.step();
    for (std::size_t j = 0; j < n; ++j) {
      const double e = std::norm(f[j]);
      mass += e;
      const double y = src.point(j) / scale;
      if (y < lo - slack || y > hi + slack) lost += e;
    }
    diag.truncation_fraction = mass > 0.0 ? lost / mass : 0.0;
    diag.band_limit_warning =
        diag.leakage_fraction > kLeakageThreshold || diag.truncation_fraction > kLeakageThreshold;
  }

  std::vector<Complex> values;
  if (method == Interpolation::BandLimited) {
    values = chirp_interpolate(spectrum, nu0, u0, du, m);
  } else {
    values.resize(m);
    for (std::size_t i = 0; i < m; ++i) values[i] = cubic_at(f.values(), u0 + du * static_cast<double>(i));
  }

  const double last_index = static_cast<double>(n - 1);
  constexpr double tol = 1e-9;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = u0 + du * static_cast<double>(i);
    if (u < -tol || u > last_index + tol) {
      values[i] = Complex{};
    } else {
      values[i] *= amplitude;
    }
  }

  return {SampledFunction(target, std::move(values), f.representation(), f.direction(), f.polarization()),
          diag};
}

Complex interpolate_at(const SampledFunction& f, double x) {
  const Axis& ax = f.axis();
  const double u = (x - ax.start()) / ax.step();
  const double last_index = static_cast<double>(ax.count() - 1);
  if (!(u >= -1e-9 && u <= last_index + 1e-9)) {
    throw std::out_of_range(fmt::format("coordinate {} outside sampled window [{}, {}]", x, ax.start(), ax.last()));
  }
  const auto spectrum = detail::fft(f.values(), detail::FftSign::Negative);
  const long n = static_cast<long>(ax.count());
  const long nu0 = band_start(f);
  Complex acc{};
  for (long j = 0; j < n; ++j) {
    const long nu = nu0 + j;
    acc += spectrum[static_cast<std::size_t>(positive_mod(nu, n))] *
           unit_phase(static_cast<double>(nu) * u, static_cast<double>(n));
  }
  return acc / static_cast<double>(n);
}

void write_csv(std::ostream& out, const SampledFunction& f) {
  out << "coordinate,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", f.axis().point(i), f[i].real(), f[i].imag());
  }
}

void write_csv(const std::filesystem::path& path, const SampledFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(out, f);
}

SampledFunction read_csv(std::istream& in, Representation rep, Direction s, Polarization lambda) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty sample file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "coordinate,re,im") throw std::runtime_error("sample file header must be 'coordinate,re,im', got '" + line + "'");

  std::vector<double> coords;
  std::vector<Complex> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c)) {
      throw std::runtime_error(fmt::format("row {}: expected three comma-separated fields", row));
    }
    try {
      std::size_t used = 0;
      const double x = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      const double re = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      const double im = std::stod(c, &used);
      if (used != c.size()) throw std::invalid_argument(c);
      if (!std::isfinite(x) || !std::isfinite(re) || !std::isfinite(im)) throw std::invalid_argument("non-finite");
      coords.push_back(x);
      values.emplace_back(re, im);
    } catch (const std::exception&) {
      throw std::runtime_error(fmt::format("row {}: malformed number in '{}'", row, line));
    }
  }

  if (coords.size() < 2) throw std::runtime_error("sample file needs at least two rows");
  const double step = (coords.back() - coords.front()) / static_cast<double>(coords.size() - 1);
  if (!(step > 0.0)) throw std::runtime_error("sample coordinates must be ascending");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double expected = coords.front() + static_cast<double>(i) * step;
    if (std::abs(coords[i] - expected) > 1e-6 * step) {
      throw std::runtime_error(fmt::format("sample coordinates are not uniformly spaced at row {}", i + 2));
    }
  }
  if (coords.size() % 2 != 0) throw std::runtime_error(fmt::format("sample count must be even, got {}", coords.size()));
  return SampledFunction(Axis(coords.front(), step, coords.size()), std::move(values), rep, s, lambda);
}

SampledFunction read_csv(const std::filesystem::path& path, Representation rep, Direction s,
                         Polarization lambda) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file " + path.string());
  return read_csv(in, rep, s, lambda);
}

}  // namespace doppler
