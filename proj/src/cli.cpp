#include "doppler/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <thread>

#include "doppler/scenario.hpp"

namespace doppler {
namespace {

namespace fs = std::filesystem;

struct SuiteRow {
  std::string name;
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t errored = 0;
  double seconds = 0.0;
  int exit_code = kExitPass;
  std::string note;
};

void print_report(std::ostream& out, const ScenarioReport& report) {
  for (const auto& c : report.checks) {
    fmt::print(out, "{:<5} {:<28} measured={:<24.17g} expected={:<24.17g} abs_error={:<10.3e} tol={:.1e}",
               c.status == CheckStatus::Pass ? "PASS" : c.status == CheckStatus::Fail ? "FAIL" : "ERROR", c.name,
               c.measured, c.expected, c.abs_error, c.tolerance);
    if (!c.diagnostics.message.empty()) fmt::print(out, "  ({})", c.diagnostics.message);
    fmt::print(out, "\n");
  }
}

SuiteRow run_one(const fs::path& path, const RunOptions& options) {
  SuiteRow row;
  row.name = path.stem().string();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto cfg = load_config(path);
    const auto report = run_scenario(cfg, options);
    row.checks = report.checks.size();
    for (const auto& c : report.checks) {
      if (c.status == CheckStatus::Pass) ++row.passed;
      if (c.status == CheckStatus::Fail) ++row.failed;
      if (c.status == CheckStatus::Error) ++row.errored;
    }
    row.exit_code = report.exit_code();
  } catch (const ConfigError& e) {
    row.exit_code = kExitUsage;
    row.note = e.problems().empty() ? e.what() : e.problems().front();
  } catch (const std::exception& e) {
    row.exit_code = kExitCheckFailure;
    row.note = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

int check_all(const fs::path& dir, const RunOptions& options, unsigned jobs, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(dir)) {
    fmt::print(err, "error: {} is not a directory\n", dir.string());
    return kExitUsage;
  }
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    fmt::print(err, "error: no .cfg files in {}\n", dir.string());
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SuiteRow> rows(configs.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t begin = 0; begin < configs.size(); begin += width) {
    std::vector<std::future<SuiteRow>> batch;
    const std::size_t end = std::min(configs.size(), begin + width);
    for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_one, configs[i], options));
    for (std::size_t i = begin; i < end; ++i) rows[i] = batch[i - begin].get();
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fmt::print(out, "{:<28} {:>6} {:>6} {:>6} {:>6} {:>9}  {}\n", "scenario", "checks", "pass", "fail", "error",
             "seconds", "status");
  int worst = kExitPass;
  for (const auto& r : rows) {
    const char* status = r.exit_code == kExitPass ? "PASS" : r.exit_code == kExitUsage ? "CONFIG" : "FAIL";
    fmt::print(out, "{:<28} {:>6} {:>6} {:>6} {:>6} {:>9.3f}  {}", r.name, r.checks, r.passed, r.failed, r.errored,
               r.seconds, status);
    if (!r.note.empty()) fmt::print(out, "  ({})", r.note);
    fmt::print(out, "\n");
    worst = std::max(worst, r.exit_code);
  }
  fmt::print(out, "{} scenarios in {:.3f} s\n", rows.size(), total);
  return worst;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Doppler-shift and blip-boost scenario runner", "doppler"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one scenario config");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output root (default: the config's output_dir)");

  std::string suite_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* all = app.add_subcommand("check-all", "Run every .cfg in a directory and print a summary");
  all->add_option("dir", suite_dir, "Directory of scenario configs")->required();
  all->add_option("--out", out_dir, "Output root (default: each config's output_dir)");
  all->add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);

  std::string kernel_out;
  auto* kernel = app.add_subcommand("export-kernel", "Write the kernel multiplier table for a config's grid");
  kernel->add_option("config", config_path, "Scenario config file")->required();
  kernel->add_option("--out", kernel_out, "CSV path (default: <output_dir>/<name>/kernel.csv)");

  auto* version = app.add_subcommand("version", "Print the version");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    fmt::print(err, "{}", app.help());
    return kExitUsage;
  }

  RunOptions options;
  if (!out_dir.empty()) options.output_root = fs::path(out_dir);

  try {
    if (*version) {
      fmt::print(out, "doppler {}\n", version_string());
      return kExitPass;
    }
    if (*run) {
      const auto cfg = load_config(config_path);
      const auto report = run_scenario(cfg, options);
      print_report(out, report);
      fmt::print(out, "report: {}\n", (scenario_output_dir(cfg, options) / "report.json").string());
      return report.exit_code();
    }
    if (*all) return check_all(suite_dir, options, jobs, out, err);
    if (*kernel) {
      const auto cfg = load_config(config_path);
      const fs::path path = kernel_out.empty() ? scenario_output_dir(cfg, options) / "kernel.csv" : fs::path(kernel_out);
      export_kernel(cfg, path);
      fmt::print(out, "kernel: {}\n", path.string());
      return kExitPass;
    }
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitCheckFailure;
  }
  return kExitUsage;
}

}  // namespace doppler
