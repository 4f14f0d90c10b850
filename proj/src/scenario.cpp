#include "doppler/scenario.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>

#include "doppler/classical_field.hpp"
#include "doppler/quantum_blip.hpp"
#include "doppler/spectral.hpp"

#ifndef DOPPLER_VERSION
#define DOPPLER_VERSION "0.0.0"
#endif

namespace doppler {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Oracle comparison points span this many widths either side of the centre.
constexpr double kOracleReach = 3.0;
constexpr int kOraclePoints = 21;

/// Thrown inside a check when it cannot run; the check is recorded as errored.
class CheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The configured analytic profile, scaled by `factor`.
std::function<Complex(double)> closed_form(const StateSpec& st, double factor) {
  return [st, factor](double x) {
    const double y = x - st.center;
    Complex v = factor * st.amplitude * std::exp(-y * y / (2.0 * st.width * st.width));
    if (st.kind == StateKind::GaussianCarrier) v *= std::polar(1.0, sign_of(st.s) * st.carrier_k * y);
    return v;
  };
}

struct Context {
  const ScenarioConfig& cfg;
  SampledFunction profile;
  std::vector<BoostParams> boosts;

  Direction s() const { return cfg.state.s; }
  const Axis& axis() const { return profile.axis(); }

  BlipState blip() const { return BlipState({profile.scaled(1.0 / norm(profile))}, cfg.constants); }

  ClassicalWavePacket packet() const {
    if (cfg.state.lambda != Polarization::H) throw CheckError("classical checks need an H-polarized state");
    return ClassicalWavePacket({profile}, cfg.constants.c);
  }

  bool analytic() const { return cfg.state.kind != StateKind::Custom; }
};

SampledFunction build_profile(const ScenarioConfig& cfg) {
  const auto& st = cfg.state;
  if (st.kind == StateKind::Custom) {
    auto f = read_csv(st.sample_file, Representation::PositionChi, st.s, st.lambda);
    if (cfg.grid && !cfg.grid->axis().matches(f.axis())) {
      throw std::runtime_error(fmt::format("{}: sample axis does not match the configured grid",
                                           st.sample_file.string()));
    }
    if (max_abs(f) == 0.0) throw std::runtime_error(fmt::format("{}: state is identically zero", st.sample_file.string()));
    return f.scaled(st.amplitude);
  }
  return sample(cfg.grid->axis(), closed_form(st, 1.0), Representation::PositionChi, st.s, st.lambda);
}

void require_decay(const Context& ctx, CheckDiagnostics& diag) {
  diag.edge_ratio = edge_ratio(ctx.profile);
  if (diag.edge_ratio > kEdgeDecayLimit) {
    throw CheckError(fmt::format("state has not decayed at the grid edges (edge/peak = {:.3g}, limit {:.0e})",
                                 diag.edge_ratio, kEdgeDecayLimit));
  }
}

void absorb(CheckDiagnostics& diag, const ResampleDiagnostics& r) {
  diag.leakage_fraction = std::max(diag.leakage_fraction, r.leakage_fraction);
  diag.truncation_fraction = std::max(diag.truncation_fraction, r.truncation_fraction);
  diag.band_limit_warning = diag.band_limit_warning || r.band_limit_warning;
}

void add_outcome(CheckRecord& rec, BoostOutcome outcome) {
  rec.diagnostics.per_boost.push_back(std::move(outcome));
}

void settle(CheckRecord& rec) {
  const auto& outcomes = rec.diagnostics.per_boost;
  const BoostOutcome* worst = nullptr;
  for (const auto& o : outcomes) {
    if (!worst || !(o.abs_error <= worst->abs_error)) worst = &o;
  }
  if (worst) {
    rec.expected = worst->expected;
    rec.measured = worst->measured;
    rec.abs_error = worst->abs_error;
    rec.rel_error = worst->expected != 0.0 ? worst->abs_error / std::abs(worst->expected) : kNaN;
  }
  if (rec.diagnostics.band_limit_warning) {
    rec.status = CheckStatus::Error;
    rec.diagnostics.message = fmt::format("band limit exceeded (leakage {:.3g}, truncation {:.3g})",
                                          rec.diagnostics.leakage_fraction, rec.diagnostics.truncation_fraction);
    return;
  }
  if (rec.status == CheckStatus::Error) return;
  const bool within = worst && rec.abs_error <= rec.tolerance;
  if (!within) {
    rec.status = CheckStatus::Fail;
  } else if (rec.status != CheckStatus::Fail) {
    rec.status = CheckStatus::Pass;
  }
}

BoostOutcome outcome(double beta, double expected, double measured) {
  return {beta, expected, measured, std::abs(measured - expected), {}};
}

void doppler_centroid(const Context& ctx, CheckRecord& rec) {
  require_decay(ctx, rec.diagnostics);
  const auto packet = ctx.packet();
  const auto before = spectrum(packet, ctx.s()).centroid;
  if (!before || std::abs(*before) < ctx.axis().step() * 1e-6) {
    throw CheckError("spectral centroid of the state is zero; the Doppler ratio needs a carrier");
  }
  rec.diagnostics.extra["centroid_alice"] = *before;
  for (const auto& b : ctx.boosts) {
    const auto boosted = boost_packet(packet, b, ctx.axis());
    absorb(rec.diagnostics, boosted.diagnostics);
    const auto after = spectrum(boosted.packet, ctx.s()).centroid;
    auto o = outcome(b.beta(), xi(ctx.s(), b), after.value_or(kNaN) / *before);
    o.extra["centroid_bob"] = after.value_or(kNaN);
    add_outcome(rec, std::move(o));
  }
}

WorldlineBox default_box(const Context& ctx) {
  // Smallest interval holding every sample above 1e-8 of the peak, widened by 10%.
  const double floor = 1e-8 * max_abs(ctx.profile);
  std::size_t lo = ctx.profile.size();
  std::size_t hi = 0;
  for (std::size_t i = 0; i < ctx.profile.size(); ++i) {
    if (std::abs(ctx.profile[i]) < floor) continue;
    lo = std::min(lo, i);
    hi = std::max(hi, i);
  }
  const double a1 = ctx.axis().point(lo);
  const double a2 = ctx.axis().point(hi);
  const double pad = 0.05 * (a2 - a1) + ctx.axis().step();
  return {a1 - pad, a2 + pad};
}

void box_energy_checks(const Context& ctx, CheckRecord& rec, bool corrected) {
  require_decay(ctx, rec.diagnostics);
  const auto packet = ctx.packet();
  WorldlineBox box = ctx.cfg.box ? WorldlineBox{ctx.cfg.box->a1, ctx.cfg.box->a2} : default_box(ctx);
  box.h = ctx.cfg.h_density;
  box.area = ctx.cfg.constants.area;
  box.epsilon = ctx.cfg.constants.epsilon;
  rec.diagnostics.extra["box_a1"] = box.a1;
  rec.diagnostics.extra["box_a2"] = box.a2;
  const double e_alice = box_energy(packet, box);
  if (!(e_alice > 0.0)) throw CheckError("the box holds no field energy");
  rec.diagnostics.extra["energy_alice"] = e_alice;
  for (const auto& b : ctx.boosts) {
    const auto boosted = boost_packet(packet, b, ctx.axis());
    absorb(rec.diagnostics, boosted.diagnostics);
    auto bob_box = boost_box(box, ctx.s(), b);
    if (!corrected) bob_box.h = box.h;
    const double e_bob = box_energy(boosted.packet, bob_box);
    auto o = outcome(b.beta(), corrected ? 1.0 : xi(ctx.s(), b), e_bob / e_alice);
    o.extra["energy_bob"] = e_bob;
    o.extra["h_bob"] = bob_box.h;
    add_outcome(rec, std::move(o));
  }
}

void photon_number_conservation(const Context& ctx, CheckRecord& rec) {
  require_decay(ctx, rec.diagnostics);
  const auto state = ctx.blip();
  const double n_alice = photon_number(state);
  for (const auto& b : ctx.boosts) {
    const auto boosted = boost_blip(state, b, ctx.axis());
    absorb(rec.diagnostics, boosted.diagnostics);
    add_outcome(rec, outcome(b.beta(), n_alice, photon_number(boosted.state)));
  }
}

void momentum_path_commutativity(const Context& ctx, CheckRecord& rec) {
  require_decay(ctx, rec.diagnostics);
  const auto state = ctx.blip();
  const auto momentum = to_momentum_state(state);
  for (const auto& b : ctx.boosts) {
    const auto via_position = boost_blip(state, b, ctx.axis());
    const auto via_momentum = boost_momentum_state(momentum, b, momentum.axis());
    absorb(rec.diagnostics, via_position.diagnostics);
    absorb(rec.diagnostics, via_momentum.diagnostics);
    const auto lhs = to_momentum_state(via_position.state);
    const double d = l2_distance(lhs.channel(ctx.s(), ctx.cfg.state.lambda),
                                 via_momentum.state.channel(ctx.s(), ctx.cfg.state.lambda));
    add_outcome(rec, outcome(b.beta(), 0.0, d));
  }
}

double oracle_discrepancy(const Context& ctx, const BlipState& state) {
  const auto field = field_matrix_element(state, ctx.s());
  const auto psi = closed_form(ctx.cfg.state, 1.0 / norm(ctx.profile));
  const auto& st = ctx.cfg.state;
  const double panel = std::min(0.1, 1.0 / (1.0 + std::abs(st.carrier_k)));
  const FinitePartOptions opts{st.center - 15.0 * st.width, st.center + 15.0 * st.width, panel};
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kOraclePoints; ++i) {
    const double chi = st.center + st.width * kOracleReach * (2.0 * i / (kOraclePoints - 1) - 1.0);
    const Complex slow = finite_part_field(psi, chi, opts, ctx.cfg.constants);
    num += std::norm(interpolate_at(field, chi) - slow);
    den += std::norm(slow);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

void kernel_consistency(const Context& ctx, CheckRecord& rec) {
  require_decay(ctx, rec.diagnostics);
  if (ctx.cfg.state.lambda != Polarization::H) throw CheckError("the field matrix element needs an H-polarized state");
  const auto state = ctx.blip();
  for (const auto& b : ctx.boosts) {
    const auto r = kernel_consistency_check(state, b, ctx.s());
    absorb(rec.diagnostics, r.diagnostics);
    add_outcome(rec, outcome(b.beta(), 0.0, r.discrepancy));
  }
  if (!ctx.analytic()) {
    rec.diagnostics.message = "finite-part oracle skipped: no closed form for sample-file states";
    return;
  }
  const double oracle = oracle_discrepancy(ctx, state);
  rec.diagnostics.extra["oracle_rel_l2"] = oracle;
  if (!(oracle <= rec.tolerance)) {
    rec.status = CheckStatus::Fail;
    rec.diagnostics.message = fmt::format("spectral field disagrees with the finite-part quadrature: {:.3g}", oracle);
  }
}

void parseval(const Context& ctx, CheckRecord& rec) {
  const auto state = ctx.blip();
  auto ratio = [](const SampledFunction& f) {
    const auto p = parseval_check(f);
    return (p.momentum_norm * p.momentum_norm) / (p.position_norm * p.position_norm);
  };
  const auto& alice = state.channel(ctx.s(), ctx.cfg.state.lambda);
  auto first = outcome(0.0, 1.0, ratio(alice));
  first.extra["alice_frame"] = 1.0;
  add_outcome(rec, std::move(first));
  for (const auto& b : ctx.boosts) {
    const auto boosted = boost_blip(state, b, ctx.axis());
    add_outcome(rec, outcome(b.beta(), 1.0, ratio(boosted.state.channel(ctx.s(), ctx.cfg.state.lambda))));
  }
}

void signal_exchange(const Context& ctx, CheckRecord& rec) {
  rec.diagnostics.edge_ratio = kNaN;
  for (const auto& b : ctx.boosts) {
    const auto r = simulate_signal_exchange(b, 1.0, ctx.cfg.constants.c);
    const double k = kappa(Direction::Right, b);
    const double gamma = 1.0 / std::sqrt((1.0 - b.beta()) * (1.0 + b.beta()));
    auto o = outcome(b.beta(), k, r.kappa_measured);
    o.extra["gamma_reception_error"] = std::abs(r.gamma_from_reception - gamma);
    o.extra["gamma_emission_error"] = std::abs(r.gamma_from_emission - gamma);
    o.extra["delay_residual"] = r.delay_residual;
    o.extra["causal"] = r.causal ? 1.0 : 0.0;
    o.abs_error = std::max({o.abs_error, o.extra["gamma_reception_error"], o.extra["gamma_emission_error"],
                            r.delay_residual});
    add_outcome(rec, std::move(o));
  }
}

void reciprocity(const Context& ctx, CheckRecord& rec) {
  rec.diagnostics.edge_ratio = kNaN;
  for (const auto& b : ctx.boosts) {
    const auto inv = inverse_boost(b);
    BoostOutcome worst = outcome(b.beta(), 1.0, 1.0);
    for (auto s : {Direction::Right, Direction::Left}) {
      for (double product : {xi(s, b) * xi(s, inv), kappa(s, b) * kappa(s, inv), kappa(s, b) * xi(s, b)}) {
        if (std::abs(product - 1.0) > worst.abs_error) worst = outcome(b.beta(), 1.0, product);
      }
    }
    add_outcome(rec, std::move(worst));
  }
}

using CheckFn = void (*)(const Context&, CheckRecord&);

CheckFn lookup(const std::string& name) {
  if (name == "doppler_centroid") return doppler_centroid;
  if (name == "box_energy_conservation") return [](const Context& c, CheckRecord& r) { box_energy_checks(c, r, true); };
  if (name == "naive_energy_ratio") return [](const Context& c, CheckRecord& r) { box_energy_checks(c, r, false); };
  if (name == "photon_number_conservation") return photon_number_conservation;
  if (name == "momentum_path_commutativity") return momentum_path_commutativity;
  if (name == "kernel_consistency") return kernel_consistency;
  if (name == "parseval") return parseval;
  if (name == "signal_exchange") return signal_exchange;
  if (name == "reciprocity") return reciprocity;
  throw std::out_of_range(fmt::format("unknown check '{}'", name));
}

bool needs_state(const std::string& name) { return name != "signal_exchange" && name != "reciprocity"; }

CheckRecord blank_record(const ScenarioConfig& cfg, const std::string& name) {
  CheckDiagnostics diag;
  diag.edge_ratio = kNaN;
  return {name, kNaN, kNaN, kNaN, kNaN, cfg.tolerance(name), CheckStatus::Pass, std::move(diag)};
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

void write_outputs(const ScenarioConfig& cfg, const RunOptions& options, const ScenarioReport& report,
                   const std::optional<SampledFunction>& profile, const std::vector<BoostParams>& boosts) {
  const auto dir = scenario_output_dir(cfg, options);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", (dir / "report.json").string()));
    out << report_json(report) << '\n';
  }
  if (!profile) return;
  write_csv(dir / "state.csv", *profile);
  write_csv(dir / "spectrum.csv", to_momentum(*profile));
  const BlipState state({profile->scaled(1.0 / norm(*profile))}, cfg.constants);
  for (std::size_t i = 0; i < boosts.size(); ++i) {
    const auto boosted = boost_blip(state, boosts[i], profile->axis());
    write_csv(dir / fmt::format("boost_{}.csv", i), boosted.state.channels().front());
  }
}

// 17 significant digits for every float; nlohmann's own dump uses the
// shortest round-trip form instead.
void emit(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.17g}", v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

nlohmann::ordered_json number_map(const std::map<std::string, double>& values) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values) j[k] = v;
  return j;
}

}  // namespace

const char* to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Error:
      return "error";
  }
  return "unknown";
}

bool ScenarioReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass(); });
}

int ScenarioReport::exit_code() const noexcept { return all_passed() ? 0 : 1; }

std::string version_string() { return DOPPLER_VERSION; }

std::filesystem::path scenario_output_dir(const ScenarioConfig& config, const RunOptions& options) {
  return options.output_root.value_or(config.output_dir) / config.name;
}

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioReport report;
  report.meta = {config.name, config.source_sha256, version_string(), utc_timestamp(), std::nullopt,
                 config.constants, config.h_density};
  if (config.grid) report.meta.grid = config.grid->axis();

  std::vector<BoostParams> boosts;
  for (double beta : config.boosts) boosts.push_back(make_boost(beta));

  std::optional<SampledFunction> profile;
  std::string build_error;
  try {
    profile = build_profile(config);
    report.meta.grid = profile->axis();
  } catch (const std::exception& e) {
    build_error = e.what();
  }

  for (const auto& name : config.checks) {
    auto rec = blank_record(config, name);
    if (needs_state(name) && !profile) {
      rec.status = CheckStatus::Error;
      rec.diagnostics.message = "state could not be built: " + build_error;
      report.checks.push_back(std::move(rec));
      continue;
    }
    const SampledFunction placeholder(centered_axis(1.0, 2), std::vector<Complex>(2), Representation::PositionChi,
                                      config.state.s);
    const Context ctx{config, profile ? *profile : placeholder, boosts};
    try {
      lookup(name)(ctx, rec);
      settle(rec);
    } catch (const std::exception& e) {
      rec.status = CheckStatus::Error;
      rec.diagnostics.message = e.what();
    }
    report.checks.push_back(std::move(rec));
  }

  if (options.write_outputs) write_outputs(config, options, report, profile, boosts);
  return report;
}

std::string report_json(const ScenarioReport& report) {
  using json = nlohmann::ordered_json;
  json meta = json::object();
  meta["scenario"] = report.meta.scenario;
  meta["config_sha256"] = report.meta.config_sha256;
  meta["version"] = report.meta.version;
  meta["timestamp"] = report.meta.timestamp;
  if (report.meta.grid) {
    meta["grid"] = {{"start", report.meta.grid->start()},
                    {"step", report.meta.grid->step()},
                    {"count", report.meta.grid->count()}};
  } else {
    meta["grid"] = nullptr;
  }
  const auto& pc = report.meta.constants;
  meta["constants"] = {{"c", pc.c}, {"hbar", pc.hbar}, {"epsilon", pc.epsilon}, {"area", pc.area},
                       {"h_density", report.meta.h_density}};

  json checks = json::array();
  for (const auto& c : report.checks) {
    json per_boost = json::array();
    for (const auto& o : c.diagnostics.per_boost) {
      per_boost.push_back({{"beta", o.beta},
                           {"expected", o.expected},
                           {"measured", o.measured},
                           {"abs_error", o.abs_error},
                           {"extra", number_map(o.extra)}});
    }
    json diag = {{"leakage_fraction", c.diagnostics.leakage_fraction},
                 {"truncation_fraction", c.diagnostics.truncation_fraction},
                 {"band_limit_warning", c.diagnostics.band_limit_warning},
                 {"edge_ratio", c.diagnostics.edge_ratio},
                 {"edge_decay_ok", std::isnan(c.diagnostics.edge_ratio) ? json(nullptr)
                                                                        : json(c.diagnostics.edge_ratio <= kEdgeDecayLimit)},
                 {"status", to_string(c.status)},
                 {"message", c.diagnostics.message},
                 {"extra", number_map(c.diagnostics.extra)},
                 {"per_boost", std::move(per_boost)}};
    checks.push_back({{"name", c.name},
                      {"expected", c.expected},
                      {"measured", c.measured},
                      {"abs_error", c.abs_error},
                      {"rel_error", c.rel_error},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass()},
                      {"diagnostics", std::move(diag)}});
  }
  json root = {{"meta", std::move(meta)}, {"checks", std::move(checks)}};
  std::string out;
  emit(root, out, 0);
  return out;
}

void export_kernel(const ScenarioConfig& config, const std::filesystem::path& csv_path) {
  std::optional<Axis> axis;
  if (config.grid) {
    axis = config.grid->axis();
  } else {
    try {
      axis = build_profile(config).axis();
    } catch (const std::exception& e) {
      throw ConfigError({std::string("grid: cannot take the axis from the sample file: ") + e.what()});
    }
  }
  const RegularisationKernel kernel(*axis, config.constants);
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", csv_path.string()));
  kernel.write_csv(out);
}

}  // namespace doppler
