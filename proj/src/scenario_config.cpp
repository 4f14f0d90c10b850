#include <fmt/format.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "doppler/scenario.hpp"

namespace doppler {
namespace {

std::string sha256_hex(std::string_view text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool known_check(const std::string& name) {
  return std::find(kCheckNames.begin(), kCheckNames.end(), name) != kCheckNames.end();
}

// Collects every schema problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& field, const std::string& what) { problems.push_back(field + ": " + what); }

  void reject_unknown(const YAML::Node& map, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
      }
    }
  }

  YAML::Node section(const YAML::Node& root, const std::string& key) {
    const auto node = root[key];
    if (node && !node.IsMap()) {
      fail(key, "expected a mapping");
      return {};
    }
    return node;
  }

  std::optional<double> number(const YAML::Node& map, const std::string& key, const std::string& field) {
    if (!map || !map[key]) return std::nullopt;
    try {
      const double v = map[key].as<double>();
      if (!std::isfinite(v)) {
        fail(field, "must be finite");
        return std::nullopt;
      }
      return v;
    } catch (const YAML::Exception&) {
      fail(field, "expected a number");
      return std::nullopt;
    }
  }

  std::optional<long long> integer(const YAML::Node& map, const std::string& key, const std::string& field) {
    if (!map || !map[key]) return std::nullopt;
    try {
      return map[key].as<long long>();
    } catch (const YAML::Exception&) {
      fail(field, "expected an integer");
      return std::nullopt;
    }
  }

  std::optional<std::string> text(const YAML::Node& map, const std::string& key, const std::string& field) {
    if (!map || !map[key]) return std::nullopt;
    if (!map[key].IsScalar()) {
      fail(field, "expected a string");
      return std::nullopt;
    }
    return map[key].as<std::string>();
  }

  double positive(const YAML::Node& map, const std::string& key, const std::string& field, double fallback) {
    const auto v = number(map, key, field);
    if (!v) return fallback;
    if (!(*v > 0.0)) fail(field, fmt::format("must be > 0, got {}", *v));
    return *v;
  }
};

std::optional<GridSpec> read_grid(Reader& r, const YAML::Node& root) {
  const auto grid = r.section(root, "grid");
  if (!grid) return std::nullopt;
  r.reject_unknown(grid, "grid", {"start", "step", "count"});
  const auto step = r.number(grid, "step", "grid.step");
  const auto count = r.integer(grid, "count", "grid.count");
  const auto start = r.number(grid, "start", "grid.start");
  bool ok = true;
  if (!step) {
    if (!grid["step"]) r.fail("grid.step", "required");
    ok = false;
  } else if (!(*step > 0.0)) {
    r.fail("grid.step", fmt::format("must be > 0, got {}", *step));
    ok = false;
  }
  if (!count) {
    if (!grid["count"]) r.fail("grid.count", "required");
    ok = false;
  } else if (*count < 2 || *count % 2 != 0) {
    r.fail("grid.count", fmt::format("must be even and >= 2, got {}", *count));
    ok = false;
  }
  if (!ok) return std::nullopt;
  const auto n = static_cast<std::size_t>(*count);
  return GridSpec{start.value_or(-static_cast<double>(n / 2) * *step), *step, n};
}

StateSpec read_state(Reader& r, const YAML::Node& root, const std::filesystem::path& base_dir) {
  StateSpec st;
  const auto node = r.section(root, "state");
  if (!node) {
    if (!root["state"]) r.fail("state", "required");
    return st;
  }
  r.reject_unknown(node, "state",
                   {"kind", "center", "width", "carrier_k", "amplitude", "s", "lambda", "sample_file"});
  const auto kind = r.text(node, "kind", "state.kind");
  if (!kind) {
    if (!node["kind"]) r.fail("state.kind", "required");
  } else if (*kind == "gaussian") {
    st.kind = StateKind::Gaussian;
  } else if (*kind == "gaussian_carrier") {
    st.kind = StateKind::GaussianCarrier;
  } else if (*kind == "custom") {
    st.kind = StateKind::Custom;
  } else {
    r.fail("state.kind", fmt::format("expected gaussian, gaussian_carrier or custom, got '{}'", *kind));
  }

  st.center = r.number(node, "center", "state.center").value_or(0.0);
  st.width = r.positive(node, "width", "state.width", 1.0);
  st.amplitude = r.number(node, "amplitude", "state.amplitude").value_or(1.0);
  if (st.amplitude == 0.0) r.fail("state.amplitude", "must be non-zero");
  const auto carrier = r.number(node, "carrier_k", "state.carrier_k");
  st.carrier_k = carrier.value_or(0.0);
  if (st.kind == StateKind::GaussianCarrier && !node["carrier_k"]) r.fail("state.carrier_k", "required for gaussian_carrier");
  if (st.kind == StateKind::Gaussian && carrier && *carrier != 0.0) {
    r.fail("state.carrier_k", "only gaussian_carrier states take a carrier");
  }

  if (const auto s = r.integer(node, "s", "state.s")) {
    if (*s == 1 || *s == -1) {
      st.s = direction_from_sign(static_cast<int>(*s));
    } else {
      r.fail("state.s", fmt::format("must be +1 or -1, got {}", *s));
    }
  }
  if (const auto lambda = r.text(node, "lambda", "state.lambda")) {
    if (*lambda == "H" || *lambda == "V") {
      st.lambda = polarization_from_string(*lambda);
    } else {
      r.fail("state.lambda", fmt::format("must be H or V, got '{}'", *lambda));
    }
  }
  if (const auto file = r.text(node, "sample_file", "state.sample_file")) {
    std::filesystem::path p(*file);
    st.sample_file = p.is_absolute() ? p : base_dir / p;
  }
  if (st.kind == StateKind::Custom && st.sample_file.empty()) r.fail("state.sample_file", "required for custom states");
  if (st.kind != StateKind::Custom && !st.sample_file.empty()) r.fail("state.sample_file", "only custom states read a sample file");
  return st;
}

}  // namespace

double default_tolerance(std::string_view check) {
  static const std::map<std::string_view, double> table = {
      {"doppler_centroid", 1e-3},
      {"box_energy_conservation", 1e-6},
      {"naive_energy_ratio", 1e-6},
      {"photon_number_conservation", 1e-6},
      {"momentum_path_commutativity", 1e-6},
      {"kernel_consistency", 1e-3},
      {"parseval", 1e-10},
      {"signal_exchange", 1e-12},
      {"reciprocity", 1e-12},
  };
  const auto it = table.find(check);
  if (it == table.end()) throw std::out_of_range(fmt::format("unknown check '{}'", check));
  return it->second;
}

const char* to_string(StateKind kind) noexcept {
  switch (kind) {
    case StateKind::Gaussian:
      return "gaussian";
    case StateKind::GaussianCarrier:
      return "gaussian_carrier";
    case StateKind::Custom:
      return "custom";
  }
  return "unknown";
}

double ScenarioConfig::tolerance(const std::string& check) const {
  const auto it = tolerances.find(check);
  return it != tolerances.end() ? it->second : default_tolerance(check);
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid scenario config:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, const std::string& name) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({fmt::format("line {}: {}", e.mark.line + 1, e.msg)});
  }
  if (!root.IsMap()) throw ConfigError({"config must be a mapping of sections"});

  Reader r;
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.source_sha256 = sha256_hex(text);
  r.reject_unknown(root, "", {"grid", "constants", "state", "boosts", "checks", "output_dir", "box", "tolerances"});

  cfg.grid = read_grid(r, root);

  if (const auto consts = r.section(root, "constants")) {
    r.reject_unknown(consts, "constants", {"c", "hbar", "epsilon", "area", "h_density"});
    cfg.constants.c = r.positive(consts, "c", "constants.c", 1.0);
    cfg.constants.hbar = r.positive(consts, "hbar", "constants.hbar", 1.0);
    cfg.constants.epsilon = r.positive(consts, "epsilon", "constants.epsilon", 1.0);
    cfg.constants.area = r.positive(consts, "area", "constants.area", 1.0);
    cfg.h_density = r.positive(consts, "h_density", "constants.h_density", 1.0);
  }

  cfg.state = read_state(r, root, base_dir);
  if (cfg.state.kind != StateKind::Custom && !cfg.grid && !root["grid"]) r.fail("grid", "required for analytic states");

  if (const auto boosts = root["boosts"]; !boosts) {
    r.fail("boosts", "required");
  } else if (!boosts.IsSequence() || boosts.size() == 0) {
    r.fail("boosts", "expected a non-empty list of beta values");
  } else {
    for (std::size_t i = 0; i < boosts.size(); ++i) {
      const auto field = fmt::format("boosts[{}]", i);
      try {
        const double beta = boosts[i].as<double>();
        if (!std::isfinite(beta) || !(std::abs(beta) < 1.0)) {
          r.fail(field, fmt::format("|beta| must be < 1, got {}", beta));
        } else {
          cfg.boosts.push_back(beta);
        }
      } catch (const YAML::Exception&) {
        r.fail(field, "expected a number");
      }
    }
  }

  if (const auto checks = root["checks"]; !checks) {
    r.fail("checks", "required");
  } else if (!checks.IsSequence() || checks.size() == 0) {
    r.fail("checks", "expected a non-empty list of check names");
  } else {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto field = fmt::format("checks[{}]", i);
      if (!checks[i].IsScalar()) {
        r.fail(field, "expected a check name");
        continue;
      }
      const auto check = checks[i].as<std::string>();
      if (!known_check(check)) {
        r.fail(field, fmt::format("unknown check '{}'", check));
      } else if (!seen.insert(check).second) {
        r.fail(field, fmt::format("duplicate check '{}'", check));
      } else {
        cfg.checks.push_back(check);
      }
    }
  }

  if (const auto tol = r.section(root, "tolerances")) {
    for (const auto& kv : tol) {
      const auto key = kv.first.as<std::string>();
      const auto field = "tolerances." + key;
      if (!known_check(key)) {
        r.fail(field, "unknown check");
        continue;
      }
      const double v = r.positive(tol, key, field, 0.0);
      if (v > 0.0) cfg.tolerances[key] = v;
    }
  }

  if (const auto box = r.section(root, "box")) {
    r.reject_unknown(box, "box", {"a1", "a2"});
    const auto a1 = r.number(box, "a1", "box.a1");
    const auto a2 = r.number(box, "a2", "box.a2");
    if (!box["a1"]) r.fail("box.a1", "required");
    if (!box["a2"]) r.fail("box.a2", "required");
    if (a1 && a2) {
      if (*a1 < *a2) {
        cfg.box = BoxSpec{*a1, *a2};
      } else {
        r.fail("box", fmt::format("needs a1 < a2, got [{}, {}]", *a1, *a2));
      }
    }
  }

  if (const auto out = r.text(root, "output_dir", "output_dir")) cfg.output_dir = *out;

  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({fmt::format("{}: cannot open config file", path.string())});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path(), path.stem().string());
}

}  // namespace doppler
