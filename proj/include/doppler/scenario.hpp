#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doppler/grid.hpp"
#include "doppler/kinematics.hpp"
#include "doppler/physical_constants.hpp"

// Declarative scenarios: a YAML config names a grid, a state, a list of
// boosts and the checks to run against them. run_scenario produces one
// record per requested check and writes report.json plus CSV dumps.

namespace doppler {

inline constexpr std::array<std::string_view, 9> kCheckNames = {
    "doppler_centroid",         "box_energy_conservation",     "naive_energy_ratio",
    "photon_number_conservation", "momentum_path_commutativity", "kernel_consistency",
    "parseval",                 "signal_exchange",             "reciprocity",
};

/// Default tolerance for a named check. Throws std::out_of_range for an unknown name.
double default_tolerance(std::string_view check);

enum class StateKind { Gaussian, GaussianCarrier, Custom };

const char* to_string(StateKind kind) noexcept;

struct GridSpec {
  double start;
  double step;
  std::size_t count;

  Axis axis() const { return Axis(start, step, count); }
};

struct StateSpec {
  StateKind kind = StateKind::Gaussian;
  double center = 0.0;
  double width = 1.0;
  double carrier_k = 0.0;
  double amplitude = 1.0;
  Direction s = Direction::Right;
  Polarization lambda = Polarization::H;
  /// Custom states only; resolved against the config file's directory.
  std::filesystem::path sample_file;
};

struct BoxSpec {
  double a1;
  double a2;
};

struct ScenarioConfig {
  /// Config file stem; names the output subdirectory.
  std::string name;
  /// Required unless the state is read from a sample file.
  std::optional<GridSpec> grid;
  PhysicalConstants constants;
  double h_density = 1.0;
  StateSpec state;
  std::vector<double> boosts;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::optional<BoxSpec> box;
  std::filesystem::path output_dir = "doppler_out";
  /// Hex SHA-256 of the config text.
  std::string source_sha256;

  double tolerance(const std::string& check) const;
};

/// Schema violations, one entry per offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Throws ConfigError for a missing or unreadable file and for schema violations.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Parses config text. Relative sample-file paths resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const std::string& name = "scenario");

enum class CheckStatus { Pass, Fail, Error };

const char* to_string(CheckStatus status) noexcept;

struct BoostOutcome {
  double beta;
  double expected;
  double measured;
  double abs_error;
  std::map<std::string, double> extra;
};

struct CheckDiagnostics {
  double leakage_fraction = 0.0;
  double truncation_fraction = 0.0;
  bool band_limit_warning = false;
  /// Edge-to-peak ratio of the input state; NaN when the check uses no state.
  double edge_ratio;
  std::vector<BoostOutcome> per_boost;
  std::map<std::string, double> extra;
  std::string message;
};

/// expected / measured come from the worst boost. pass = abs_error <= tolerance.
struct CheckRecord {
  std::string name;
  double expected;
  double measured;
  double abs_error;
  /// abs_error / |expected|; NaN when expected is zero.
  double rel_error;
  double tolerance;
  CheckStatus status;
  CheckDiagnostics diagnostics;

  bool pass() const noexcept { return status == CheckStatus::Pass; }
};

struct ReportMeta {
  std::string scenario;
  std::string config_sha256;
  std::string version;
  std::string timestamp;
  std::optional<Axis> grid;
  PhysicalConstants constants;
  double h_density;
};

struct ScenarioReport {
  ReportMeta meta;
  std::vector<CheckRecord> checks;

  bool all_passed() const noexcept;
  /// 0 when every check passed, 1 otherwise.
  int exit_code() const noexcept;
};

struct RunOptions {
  /// Overrides config.output_dir; the report goes to <dir>/<name>/.
  std::optional<std::filesystem::path> output_root;
  bool write_outputs = true;
};

/// Runs every requested check. Checks that cannot run are recorded as
/// CheckStatus::Error; this function only throws for I/O failures while
/// writing outputs.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// The report as JSON text. Floating-point numbers carry 17 significant
/// digits; non-finite values become null.
std::string report_json(const ScenarioReport& report);

/// Directory the run writes to.
std::filesystem::path scenario_output_dir(const ScenarioConfig& config, const RunOptions& options);

/// Kernel multiplier table for the config's grid and constants.
/// Throws ConfigError when the config has no grid and no readable sample file.
void export_kernel(const ScenarioConfig& config, const std::filesystem::path& csv_path);

std::string version_string();

}  // namespace doppler
