#include "doppler/quantum_blip.hpp"

#include <fmt/format.h>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "doppler/spectral.hpp"

namespace doppler {
namespace {

void validate_channels(const std::vector<SampledFunction>& channels, Representation rep) {
  if (channels.empty()) throw std::invalid_argument("a blip state needs at least one channel");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& ch = channels[i];
    if (ch.representation() != rep) {
      throw std::invalid_argument(fmt::format("blip channel must be {}", to_string(rep)));
    }
    if (!ch.axis().matches(channels.front().axis())) throw std::invalid_argument("blip channels must share one axis");
    for (std::size_t j = 0; j < i; ++j) {
      if (channels[j].direction() == ch.direction() && channels[j].polarization() == ch.polarization()) {
        throw std::invalid_argument("duplicate (s, lambda) blip channel");
      }
    }
  }
}

const SampledFunction& find_channel(const std::vector<SampledFunction>& channels, Direction s,
                                    Polarization lambda) {
  for (const auto& ch : channels) {
    if (ch.direction() == s && ch.polarization() == lambda) return ch;
  }
  throw std::out_of_range(fmt::format("state has no (s = {}, lambda = {}) channel", static_cast<int>(s),
                                      to_string(lambda)));
}

double summed_norm2(const std::vector<SampledFunction>& channels) {
  double total = 0.0;
  for (const auto& ch : channels) {
    const double n = norm(ch);
    total += n * n;
  }
  return total;
}

double relative_l2(const SampledFunction& lhs, const SampledFunction& rhs) {
  const double ref = norm(rhs);
  const double diff = l2_distance(lhs, rhs);
  return ref > 0.0 ? diff / ref : diff;
}

}  // namespace

BlipState::BlipState(std::vector<SampledFunction> channels, PhysicalConstants constants)
    : channels_(std::move(channels)), constants_(constants) {
  validate_channels(channels_, Representation::PositionChi);
  constants_.validate();
}

bool BlipState::has_channel(Direction s, Polarization lambda) const noexcept {
  for (const auto& ch : channels_) {
    if (ch.direction() == s && ch.polarization() == lambda) return true;
  }
  return false;
}

const SampledFunction& BlipState::channel(Direction s, Polarization lambda) const {
  return find_channel(channels_, s, lambda);
}

MomentumBlipState::MomentumBlipState(std::vector<SampledFunction> channels, PhysicalConstants constants)
    : channels_(std::move(channels)), constants_(constants) {
  validate_channels(channels_, Representation::MomentumK);
  constants_.validate();
}

const SampledFunction& MomentumBlipState::channel(Direction s, Polarization lambda) const {
  return find_channel(channels_, s, lambda);
}

Complex PropagatedBlip::operator()(double x, Direction s, Polarization lambda) const {
  const auto coord = chi_of_event(x, t_, s, state_.constants().c);
  return interpolate_at(state_.channel(s, lambda), coord.chi);
}

double PropagatedBlip::photon_number() const { return doppler::photon_number(state_); }

PropagatedBlip propagate_blip(const BlipState& state, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  return PropagatedBlip(state, t);
}

BoostedBlip boost_blip(const BlipState& state, const BoostParams& boost, const Axis& target) {
  std::vector<SampledFunction> out;
  ResampleDiagnostics diag;
  for (const auto& ch : state.channels()) {
    const double x = xi(ch.direction(), boost);
    auto r = resample(ch, x, std::sqrt(x), target);
    diag = diag.merged(r.diagnostics);
    out.push_back(std::move(r.function));
  }
  return {BlipState(std::move(out), state.constants()), diag};
}

double photon_number(const BlipState& state) { return summed_norm2(state.channels()); }

double photon_number(const MomentumBlipState& state) { return summed_norm2(state.channels()); }

MomentumBlipState to_momentum_state(const BlipState& state) {
  std::vector<SampledFunction> out;
  out.reserve(state.channels().size());
  for (const auto& ch : state.channels()) out.push_back(to_momentum(ch));
  return MomentumBlipState(std::move(out), state.constants());
}

BlipState to_position_state(const MomentumBlipState& state) {
  std::vector<SampledFunction> out;
  out.reserve(state.channels().size());
  for (const auto& ch : state.channels()) out.push_back(to_position(ch));
  return BlipState(std::move(out), state.constants());
}

BoostedMomentumBlip boost_momentum_state(const MomentumBlipState& state, const BoostParams& boost,
                                         const Axis& target_k) {
  std::vector<SampledFunction> out;
  ResampleDiagnostics diag;
  for (const auto& ch : state.channels()) {
    const double k = kappa(ch.direction(), boost);
    auto r = resample(ch, k, std::sqrt(k), target_k);
    diag = diag.merged(r.diagnostics);
    out.push_back(std::move(r.function));
  }
  return {MomentumBlipState(std::move(out), state.constants()), diag};
}

BoostedMomentumBlip boost_momentum_state(const MomentumBlipState& state, const BoostParams& boost,
                                         const Axis& target_k, double chi_origin) {
  auto boosted = boost_momentum_state(state, boost, target_k);
  std::vector<SampledFunction> out;
  for (const auto& ch : boosted.state.channels()) out.push_back(ch.with_conjugate_origin(chi_origin));
  return {MomentumBlipState(std::move(out), state.constants()), boosted.diagnostics};
}

double mode_occupation(const MomentumBlipState& state, double k_lo, double k_hi) {
  const Axis& ax = state.axis();
  if (!std::isfinite(k_lo) || !std::isfinite(k_hi) || !(k_lo < k_hi)) {
    throw std::invalid_argument("mode window needs k_lo < k_hi");
  }
  const double slack = 1e-9 * ax.step();
  if (k_lo < ax.start() - slack || k_hi > ax.last() + slack) {
    throw std::invalid_argument(fmt::format("mode window [{}, {}] leaves the k-axis [{}, {}]", k_lo, k_hi,
                                            ax.start(), ax.last()));
  }
  double total = 0.0;
  std::size_t hits = 0;
  for (const auto& ch : state.channels()) {
    for (std::size_t m = 0; m < ax.count(); ++m) {
      const double k = ax.point(m);
      if (k < k_lo || k > k_hi) continue;
      total += std::norm(ch[m]);
      ++hits;
    }
  }
  if (hits == 0) throw std::invalid_argument("mode window contains no grid wave numbers");
  return total * ax.step();
}

double finite_part_transform_coefficient() noexcept {
  return -2.0 * std::sqrt(2.0 * std::numbers::pi);
}

RegularisationKernel::RegularisationKernel(const Axis& chi_axis, const PhysicalConstants& constants)
    : chi_axis_(chi_axis), k_axis_(doppler::momentum_axis(chi_axis)), c_(constants.c) {
  constants.validate();
  prefactor_ = -std::sqrt(constants.hbar / (4.0 * std::numbers::pi * constants.epsilon * constants.c * constants.area));
  table_.resize(k_axis_.count());
  for (std::size_t m = 0; m < k_axis_.count(); ++m) table_[m] = multiplier_at(k_axis_.point(m));
}

Complex RegularisationKernel::multiplier_at(double k) const noexcept {
  return {c_ * prefactor_ * finite_part_transform_coefficient() * std::sqrt(std::abs(k)), 0.0};
}

void RegularisationKernel::write_csv(std::ostream& out) const {
  out << "k,m_re,m_im\n";
  for (std::size_t m = 0; m < table_.size(); ++m) {
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", k_axis_.point(m), table_[m].real(), table_[m].imag());
  }
}

SampledFunction field_matrix_element(const BlipState& state, Direction s, const RegularisationKernel& kernel) {
  const auto& psi = state.channel(s, Polarization::H);
  if (!kernel.position_axis().matches(psi.axis())) {
    throw std::invalid_argument("regularisation kernel was built for a different grid");
  }
  const auto spectrum = to_momentum(psi);
  std::vector<Complex> weighted(spectrum.size());
  const auto m = kernel.multiplier();
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = m[i] * spectrum[i];
  return to_position(spectrum.with_values(std::move(weighted)));
}

SampledFunction field_matrix_element(const BlipState& state, Direction s) {
  return field_matrix_element(state, s, RegularisationKernel(state.axis(), state.constants()));
}

SampledFunction magnetic_matrix_element(const BlipState& state, Direction s) {
  return field_matrix_element(state, s).scaled(sign_of(s) / state.constants().c);
}

KernelConsistencyReport kernel_consistency_check(const BlipState& state, const BoostParams& boost,
                                                 Direction s) {
  return kernel_consistency_check(state, boost, s, state.axis());
}

KernelConsistencyReport kernel_consistency_check(const BlipState& state, const BoostParams& boost,
                                                 Direction s, const Axis& target) {
  const auto boosted = boost_blip(state, boost, target);
  const auto lhs = field_matrix_element(boosted.state, s);
  const double x = xi(s, boost);
  const auto rhs = resample(field_matrix_element(state, s), x, x, target);
  return {relative_l2(lhs, rhs.function), boosted.diagnostics.merged(rhs.diagnostics)};
}

Complex finite_part_field(const std::function<Complex(double)>& psi, double chi,
                          const FinitePartOptions& options, const PhysicalConstants& constants) {
  using boost::math::quadrature::gauss;
  if (!(options.panel_width > 0.0) || !(options.support_lo < options.support_hi)) {
    throw std::invalid_argument("finite-part quadrature needs a positive panel width and a non-empty support");
  }
  constants.validate();

  const Complex centre = psi(chi);
  auto bracket = [&](double u) { return psi(chi - u) + psi(chi + u) - 2.0 * centre; };

  const double reach = std::max({chi - options.support_lo, options.support_hi - chi, options.panel_width});
  const double inner = std::min(options.panel_width, reach);

  // u = t^2 on the first panel removes the u^{-3/2} weight: du u^{-3/2} = 2 dt / t^2.
  Complex integral{};
  const double t_max = std::sqrt(inner);
  constexpr int kInnerPanels = 4;
  for (int p = 0; p < kInnerPanels; ++p) {
    const double a = t_max * p / kInnerPanels;
    const double b = t_max * (p + 1) / kInnerPanels;
    integral += gauss<double, 20>::integrate(
        [&](double t) { return 2.0 / (t * t) * bracket(t * t); }, a, b);
  }

  const auto panels = static_cast<long>(std::ceil((reach - inner) / options.panel_width));
  if (panels > 0) {
    const double width = (reach - inner) / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
      const double a = inner + width * static_cast<double>(p);
      integral += gauss<double, 20>::integrate(
          [&](double u) { return bracket(u) / (u * std::sqrt(u)); }, a, a + width);
    }
  }

  // Beyond `reach` only the -2 psi(chi) term survives: integral_R^inf u^{-3/2} du = 2 / sqrt(R).
  integral += -2.0 * centre * (2.0 / std::sqrt(reach));

  const double prefactor =
      -std::sqrt(constants.hbar / (4.0 * std::numbers::pi * constants.epsilon * constants.c * constants.area));
  return constants.c * prefactor * integral;
}

}  // namespace doppler
