#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "CLI11.hpp"
#include "mkg/errors.hpp"

namespace mkg::cli {

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"basis.K", KeyType::integer, "8", "band limit"},
      {"basis.dealias", KeyType::integer, "0", "quadrature exactness degree, 0 for 4K"},
      {"run.dt", KeyType::real, "1e-3", "time step"},
      {"run.hubble", KeyType::real, "1", "Hubble constant H"},
      {"run.seed", KeyType::integer, "1", "data seed"},
      {"run.amplitude", KeyType::real, "0.1", "sqrt(S_2) of the initial data"},
      {"run.m_max", KeyType::integer, "2", "Sobolev order of the round-trip metric"},
      {"run.monitor_every", KeyType::integer, "10", "steps between stored samples"},
      {"run.tau_start", KeyType::real, "0", "initial slice"},
      {"run.tau_target", KeyType::real, "pi/2", "final slice of evolve"},
      {"data.kind", KeyType::text, "random", "random | cos | sin | zero"},
      {"data.max_degree", KeyType::integer, "-1", "highest populated degree, -1 for K"},
      {"data.epsilon", KeyType::real, "0.1", "amplitude of the homogeneous solutions"},
      {"data.delta", KeyType::real, "0", "phase of the homogeneous solutions"},
      {"tolerances.elliptic", KeyType::real, "1e-12", "relative tolerance of the elliptic solves"},
      {"tolerances.constraint", KeyType::real, "1e-6", "hard limit on ||div A|| / (1 + ||A||_H1)"},
      {"tolerances.projection_gate", KeyType::real, "1e-8", "largest accepted post-step projection"},
      {"tolerances.cfl", KeyType::real, "0.5", "dt <= cfl / (K + 1)"},
      {"evolve.commuted", KeyType::boolean, "true", "monitor the commuted energies"},
      {"evolve.checkpoint", KeyType::boolean, "false", "write snapshots and monitor.csv under checkpoints/"},
      {"evolve.resume", KeyType::boolean, "false", "continue from the latest checkpoint"},
      {"decay.field", KeyType::text, "phi", "phi | a0"},
      {"decay.eta_min", KeyType::real, "8", "fit window start, units of 1/H"},
      {"decay.eta_max", KeyType::real, "12", "fit window end, units of 1/H"},
      {"decay.samples", KeyType::integer, "41", "samples in the fit window"},
      {"decay.threshold", KeyType::real, "1e-2", "relative boundary-value threshold"},
      {"decay.points", KeyType::integer, "8", "random sample points besides the pole"},
      {"profile.r1", KeyType::real, "0", "inner radius"},
      {"profile.r2", KeyType::real, "0.5", "outer radius"},
      {"profile.t_min", KeyType::real, "6", "window start, units of 1/H"},
      {"profile.t_max", KeyType::real, "10", "window end, units of 1/H"},
      {"profile.t_samples", KeyType::integer, "21", "samples in the window"},
      {"profile.angular_samples", KeyType::integer, "12", "directions on the sphere of radius r2"},
      {"eigenmode.n_t", KeyType::integer, "200", "time nodes"},
      {"eigenmode.n_r", KeyType::integer, "200", "radial nodes"},
      {"eigenmode.t_max", KeyType::real, "2", "time range, units of 1/H"},
      {"eigenmode.r_max", KeyType::real, "0.9", "radial range, units of 1/H"},
      {"eigenmode.order", KeyType::integer, "12", "finite-difference order"},
      {"gronwall.poly", KeyType::text, "0,0,1", "coefficients P_0, P_1, ..."},
      {"gronwall.f0", KeyType::text, "0.9,0.5,0.1,0.01,0.001,0.0001", "initial values"},
      {"gronwall.tau_max", KeyType::real, "1", "integration length"},
      {"gronwall.dt", KeyType::real, "1e-3", "RK4 step"},
  };
  return keys;
}

namespace {

const KeySpec& spec_of(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return k;
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

long parse_integer(const std::string& s) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool parse_boolean(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  const bool neg = !s.empty() && s[0] == '-';
  const std::string body = neg ? s.substr(1) : s;
  double v = 0.0;
  if (body == "pi") {
    v = std::numbers::pi;
  } else if (body == "pi/2") {
    v = std::numbers::pi / 2;
  } else {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError("not a real number: '" + s + "'");
    }
    return v;
  }
  return neg ? -v : v;
}

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values_[k.key] = k.default_value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(is);
  } catch (const CLI::Error& e) {
    throw ConfigError("malformed config file '" + path + "': " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    if (item.parents.empty()) throw ConfigError("key '" + item.name + "' outside a [section] in '" + path + "'");
    set(item.fullname(), value);
  }
}

void RunConfig::assign(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected section.key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  spec_of(key);
  values_[key] = trim(value);
}

const std::string& RunConfig::raw(const std::string& key) const {
  spec_of(key);
  return values_.at(key);
}

long RunConfig::integer(const std::string& key) const { return parse_integer(raw(key)); }
double RunConfig::real(const std::string& key) const { return parse_real(raw(key)); }
bool RunConfig::boolean(const std::string& key) const { return parse_boolean(raw(key)); }
const std::string& RunConfig::text(const std::string& key) const { return raw(key); }

std::vector<double> RunConfig::real_list(const std::string& key) const {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(raw(key));
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_real(item));
  }
  return out;
}

void RunConfig::validate() const {
  for (const auto& k : config_keys()) {
    try {
      switch (k.type) {
        case KeyType::integer:
          integer(k.key);
          break;
        case KeyType::real:
          real(k.key);
          break;
        case KeyType::boolean:
          boolean(k.key);
          break;
        case KeyType::text:
          break;
      }
    } catch (const ConfigError& e) {
      throw ConfigError(k.key + ": " + e.what());
    }
  }
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  const long k = integer("basis.K");
  require(k >= 1 && k <= 32, "basis.K must lie in 1..32");
  require(integer("basis.dealias") == 0 || integer("basis.dealias") >= 2 * k + 1, "basis.dealias must be 0 or >= 2K+1");
  require(real("run.dt") > 0.0, "run.dt must be positive");
  require(real("run.hubble") > 0.0, "run.hubble must be positive");
  require(integer("run.seed") >= 0, "run.seed must be nonnegative");
  require(real("run.amplitude") >= 0.0, "run.amplitude must be nonnegative");
  require(integer("run.m_max") >= 1 && integer("run.m_max") <= 3, "run.m_max must lie in 1..3");
  require(integer("run.monitor_every") >= 1, "run.monitor_every must be at least 1");
  require(std::abs(real("run.tau_start")) <= std::numbers::pi / 2, "run.tau_start must lie in [-pi/2, pi/2]");
  require(std::abs(real("run.tau_target")) <= std::numbers::pi / 2, "run.tau_target must lie in [-pi/2, pi/2]");
  const std::string& kind = text("data.kind");
  require(kind == "random" || kind == "cos" || kind == "sin" || kind == "zero", "data.kind must be random, cos, sin or zero");
  require(real("tolerances.elliptic") > 0.0 && real("tolerances.constraint") > 0.0 &&
              real("tolerances.projection_gate") > 0.0 && real("tolerances.cfl") > 0.0,
          "tolerances must be positive");
  require(real("run.dt") <= real("tolerances.cfl") / static_cast<double>(k + 1) * (1.0 + 1e-12),
          "run.dt violates the CFL limit cfl/(K+1)");
  require(text("decay.field") == "phi" || text("decay.field") == "a0", "decay.field must be phi or a0");
  require(real("decay.eta_min") >= 0.0 && real("decay.eta_max") > real("decay.eta_min"),
          "decay window must satisfy 0 <= eta_min < eta_max");
  require(integer("decay.samples") >= 2 && integer("decay.points") >= 0, "decay.samples >= 2, decay.points >= 0");
  require(real("decay.threshold") >= 0.0, "decay.threshold must be nonnegative");
  const double h = real("run.hubble");
  require(real("profile.r1") >= 0.0 && real("profile.r2") >= real("profile.r1") && h * real("profile.r2") < 1.0,
          "profile radii must satisfy 0 <= r1 <= r2 < 1/H");
  require(real("profile.t_max") > real("profile.t_min") && integer("profile.t_samples") >= 2 &&
              integer("profile.angular_samples") >= 1,
          "profile window needs t_min < t_max, t_samples >= 2, angular_samples >= 1");
  require(integer("eigenmode.n_t") >= 2 && integer("eigenmode.n_r") >= 2 && real("eigenmode.t_max") > 0.0,
          "eigenmode grid needs n_t, n_r >= 2 and t_max > 0");
  require(real("eigenmode.r_max") > 0.0 && real("eigenmode.r_max") <= 0.95, "eigenmode.r_max must lie in (0, 0.95]");
  require(integer("eigenmode.order") >= 2 && integer("eigenmode.order") % 2 == 0, "eigenmode.order must be even");
  for (double c : real_list("gronwall.poly")) require(c >= 0.0, "gronwall.poly coefficients must be nonnegative");
  const auto f0 = real_list("gronwall.f0");
  require(!f0.empty(), "gronwall.f0 must not be empty");
  for (double v : f0) require(v >= 0.0, "gronwall.f0 values must be nonnegative");
  require(real("gronwall.tau_max") >= 0.0 && real("gronwall.dt") > 0.0, "gronwall needs tau_max >= 0, dt > 0");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : values_) j[key] = value;
  return j;
}

}  // namespace mkg::cli
