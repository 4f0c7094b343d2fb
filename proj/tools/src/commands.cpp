#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "mkg/conformal/conformal.hpp"
#include "mkg/errors.hpp"
#include "mkg/evolution/evolution.hpp"
#include "mkg/gronwall/gronwall.hpp"
#include "mkg/s3/oracles.hpp"
#include "mkg/scattering/scattering.hpp"
#include "mkg/state/gauge.hpp"

#ifndef MKG_VERSION
#define MKG_VERSION "unknown"
#endif

namespace mkg::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using state::FieldState;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

s3::BasisPtr make_basis(const RunConfig& cfg) {
  s3::BasisSpec spec;
  spec.band_limit = static_cast<int>(cfg.integer("basis.K"));
  spec.dealias_degree = static_cast<int>(cfg.integer("basis.dealias"));
  return s3::Basis::create(spec);
}

evolution::EvolveOptions evolve_options(const RunConfig& cfg) {
  evolution::EvolveOptions o;
  o.step.cfl = cfg.real("tolerances.cfl");
  o.step.projection_gate = cfg.real("tolerances.projection_gate");
  o.step.rhs.elliptic_tol = cfg.real("tolerances.elliptic");
  o.step.rhs.constraint_limit = cfg.real("tolerances.constraint");
  o.monitor_commuted = cfg.boolean("evolve.commuted");
  return o;
}

scattering::ScatterOptions scatter_options(const RunConfig& cfg) {
  scattering::ScatterOptions o;
  o.dt = cfg.real("run.dt");
  o.monitor_every = static_cast<int>(cfg.integer("run.monitor_every"));
  o.evolve = evolve_options(cfg);
  return o;
}

// Initial slice at tau. The cos and sin kinds are the spatially homogeneous
// solutions phi = eps cos(tau + delta), phi = eps sin(tau + delta).
FieldState initial_state(const RunConfig& cfg, const s3::BasisPtr& basis, double tau) {
  const double h = cfg.real("run.hubble");
  const std::string& kind = cfg.text("data.kind");
  FieldState s;
  if (kind == "random") {
    s = state::random_admissible(basis, cfg.real("run.amplitude"), static_cast<std::uint64_t>(cfg.integer("run.seed")),
                                 h, static_cast<int>(cfg.integer("data.max_degree")), cfg.real("tolerances.elliptic"));
    s.tau = tau;
    return s;
  }
  s = FieldState::zero(basis, tau, h);
  if (kind == "zero") return s;
  const double eps = cfg.real("data.epsilon");
  const double arg = tau + cfg.real("data.delta");
  const bool cosine = kind == "cos";
  s.phi = s3::ScalarField::constant(basis, eps * (cosine ? std::cos(arg) : std::sin(arg)));
  s.phi_dot = s3::ScalarField::constant(basis, eps * (cosine ? -std::sin(arg) : std::cos(arg)));
  return s;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

double max_constraint(const evolution::Trajectory& traj) {
  double m = 0.0;
  for (const auto& r : traj.monitor_log) m = std::max(m, r.constraints.max());
  return m;
}

void write_trajectory(const fs::path& dir, const evolution::Trajectory& traj) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    state::save_state(evolution::checkpoint_snapshot_path(dir.string(), static_cast<int>(i)), traj.states[i]);
  }
}

CommandResult cmd_evolve(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto basis = make_basis(cfg);
  auto opts = evolve_options(cfg);
  FieldState s0;
  if (cfg.boolean("evolve.checkpoint") || cfg.boolean("evolve.resume")) opts.checkpoint_dir = (out / "checkpoints").string();
  if (cfg.boolean("evolve.resume")) {
    int index = 0;
    s0 = evolution::resume_checkpoint(opts.checkpoint_dir, &index, basis);
    opts.checkpoint_start_index = index;
    res.summary["resumed_from"] = index;
  } else {
    s0 = initial_state(cfg, basis, cfg.real("run.tau_start"));
  }

  evolution::Trajectory traj;
  bool blew_up = false;
  try {
    traj = evolution::evolve(s0, cfg.real("run.tau_target"), cfg.real("run.dt"),
                             static_cast<int>(cfg.integer("run.monitor_every")), opts);
  } catch (const evolution::BlowUpError& e) {
    traj = e.partial();
    blew_up = true;
    res.summary["error"] = e.what();
  }

  energies::write_energy_csv((out / "energy.csv").string(), traj.monitor_log);
  write_trajectory(out / "trajectory", traj);
  if (!traj.states.empty()) state::save_state((out / "final.mkgsnap").string(), traj.states.back());
  const auto eq = evolution::equivalence_report(traj);
  write_json(out / "equivalence.json", energies::to_json(eq));

  res.summary["steps"] = traj.steps;
  res.summary["samples"] = traj.states.size();
  res.summary["tau_end"] = traj.states.empty() ? s0.tau : traj.states.back().tau;
  res.summary["max_energy_drift"] = eq.max_drift;
  res.summary["max_constraint"] = max_constraint(traj);
  res.summary["blew_up"] = blew_up;
  res.timings["evolve"] = traj.wallclock;
  if (blew_up) res.exit_code = kNumerical;
  return res;
}

CommandResult cmd_scatter(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto basis = make_basis(cfg);
  state::AsymptoticData u_minus{state::Side::past, initial_state(cfg, basis, -kHalfPi)};
  const auto rep = scattering::scattering_report(u_minus, scatter_options(cfg));
  json j = scattering::to_json(rep);
  res.timings["scatter"] = j["wallclock"];
  j.erase("wallclock");
  write_json(out / "scatter.json", j);
  res.summary = j;
  return res;
}

CommandResult cmd_roundtrip(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto basis = make_basis(cfg);
  const FieldState u0 = initial_state(cfg, basis, 0.0);
  const int m = static_cast<int>(cfg.integer("run.m_max"));
  const auto t0 = std::chrono::steady_clock::now();
  const double err = scattering::roundtrip_error(u0, m, scatter_options(cfg));
  res.timings["roundtrip"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json j = {{"roundtrip_error", err}, {"m", m}, {"seed", cfg.integer("run.seed")},
                  {"S2_initial", state::sobolev_size(u0, 2)}};
  write_json(out / "roundtrip.json", j);
  res.summary = j;
  return res;
}

// Trajectory from tau_start to the future boundary with the data of cfg.
evolution::Trajectory boundary_run(const RunConfig& cfg, const s3::BasisPtr& basis, CommandResult& res) {
  const FieldState s0 = initial_state(cfg, basis, cfg.real("run.tau_start"));
  auto traj = evolution::evolve(s0, kHalfPi, cfg.real("run.dt"), static_cast<int>(cfg.integer("run.monitor_every")),
                                evolve_options(cfg));
  res.timings["evolve"] = traj.wallclock;
  return traj;
}

CommandResult cmd_decay_fit(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto basis = make_basis(cfg);
  const auto traj = boundary_run(cfg, basis, res);

  conformal::DecayFitOptions opts;
  opts.eta_min = cfg.real("decay.eta_min");
  opts.eta_max = cfg.real("decay.eta_max");
  opts.samples = static_cast<int>(cfg.integer("decay.samples"));
  opts.threshold = cfg.real("decay.threshold");
  opts.field = cfg.text("decay.field") == "a0" ? conformal::PointSeries::Field::a0 : conformal::PointSeries::Field::phi;

  std::vector<s3::S3Point> points{s3::S3Point::from_r4({-1.0, 0.0, 0.0, 0.0})};
  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("run.seed")) + 1000);
  std::normal_distribution<double> normal;
  for (long i = 0; i < cfg.integer("decay.points"); ++i) {
    std::array<double, 4> x{};
    double n = 0.0;
    for (auto& v : x) {
      v = normal(rng);
      n += v * v;
    }
    for (auto& v : x) v /= std::sqrt(n);
    points.push_back(s3::S3Point::from_r4(x));
  }

  std::vector<conformal::DecayFit> fits;
  json rows = json::array();
  const double h = cfg.real("run.hubble");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = points[i].r4();
    json row = {{"point", i}, {"x", x}};
    try {
      const auto fit = conformal::decay_fit(traj, points[i], opts);
      row["slope"] = fit.slope;
      row["relative_error"] = std::abs(fit.slope + h) / h;
      row["rms_residual"] = fit.rms_residual;
      row["boundary_value"] = fit.boundary_value;
      fits.push_back(fit);
    } catch (const RateUndefinedError& e) {
      row["slope"] = nullptr;
      row["undefined"] = e.what();
      fits.push_back({});
    }
    rows.push_back(row);
  }
  conformal::write_decay_csv((out / "decay.csv").string(), fits);
  const json j = {{"field", cfg.text("decay.field")}, {"expected_slope", -h}, {"points", rows}};
  write_json(out / "decay.json", j);
  res.summary = j;
  return res;
}

CommandResult cmd_profile(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto basis = make_basis(cfg);
  const auto traj = boundary_run(cfg, basis, res);
  conformal::ProfileOptions opts;
  opts.r1 = cfg.real("profile.r1");
  opts.r2 = cfg.real("profile.r2");
  opts.t_min = cfg.real("profile.t_min");
  opts.t_max = cfg.real("profile.t_max");
  opts.t_samples = static_cast<int>(cfg.integer("profile.t_samples"));
  opts.angular_samples = static_cast<int>(cfg.integer("profile.angular_samples"));
  const json j = conformal::to_json(conformal::profile_check(traj, opts));
  write_json(out / "profile.json", j);
  res.summary = j;
  return res;
}

CommandResult cmd_eigenmode(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  conformal::EigenmodeGrid g;
  g.n_t = static_cast<int>(cfg.integer("eigenmode.n_t"));
  g.n_r = static_cast<int>(cfg.integer("eigenmode.n_r"));
  g.t_max = cfg.real("eigenmode.t_max");
  g.r_max = cfg.real("eigenmode.r_max");
  g.order = static_cast<int>(cfg.integer("eigenmode.order"));
  const auto r = conformal::eigenmode_residual(g, cfg.real("run.hubble"));
  const json j = {{"max_residual", r.max_residual}, {"t_at", r.t_at}, {"r_at", r.r_at},
                  {"n_t", g.n_t}, {"n_r", g.n_r}, {"order", g.order}};
  write_json(out / "eigenmode.json", j);
  res.summary = j;
  return res;
}

CommandResult cmd_gronwall(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const gronwall::PolySpec p(cfg.real_list("gronwall.poly"));
  const auto table = gronwall::verify_lemma(p, cfg.real_list("gronwall.f0"), cfg.real("gronwall.tau_max"),
                                            cfg.real("gronwall.dt"));
  gronwall::write_lemma_csv((out / "lemma.csv").string(), table);
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"f0", r.f0}, {"C", r.c}, {"C_proof", r.c_proof}, {"blew_up", r.blew_up}});
  }
  const json j = {{"poly", p.coeffs},          {"c_small", table.c_small},       {"monotone", table.monotone},
                  {"bounded", table.bounded},  {"threshold_f0", table.threshold_f0}, {"rows", rows}};
  write_json(out / "gronwall.json", j);
  res.summary = j;
  return res;
}

CommandResult cmd_op_check(const RunConfig& cfg, const fs::path& out) {
  CommandResult res;
  const auto rep = s3::run_op_check(make_basis(cfg), static_cast<std::uint64_t>(cfg.integer("run.seed")));
  const json j = s3::to_json(rep);
  write_json(out / "opcheck.json", j);
  res.summary = j;
  if (!rep.all_pass()) res.exit_code = kNumerical;
  return res;
}

CommandResult dispatch(const std::string& name, const RunConfig& cfg, const fs::path& out) {
  if (name == "evolve") return cmd_evolve(cfg, out);
  if (name == "scatter") return cmd_scatter(cfg, out);
  if (name == "roundtrip") return cmd_roundtrip(cfg, out);
  if (name == "decay-fit") return cmd_decay_fit(cfg, out);
  if (name == "profile") return cmd_profile(cfg, out);
  if (name == "eigenmode") return cmd_eigenmode(cfg, out);
  if (name == "gronwall") return cmd_gronwall(cfg, out);
  if (name == "op-check") return cmd_op_check(cfg, out);
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json versions() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  std::ostringstream nl;
  nl << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.' << NLOHMANN_JSON_VERSION_PATCH;
  return {{"mkg", MKG_VERSION}, {"eigen", eigen.str()}, {"nlohmann_json", nl.str()},
          {"fft", s3::fft_library_version()}, {"cli11", CLI11_VERSION}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"evolve",  "scatter",   "roundtrip", "decay-fit",
                                                 "profile", "eigenmode", "gronwall",  "op-check"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out(out_dir);
  json manifest = {{"subcommand", name}, {"config", cfg.to_json()}, {"versions", versions()}};
  CommandResult res;
  std::string error;
  try {
    fs::create_directories(out);
    cfg.validate();
    const auto basis = make_basis(cfg);
    manifest["calibration"] = {{"c0", basis->projector_shift()}, {"s0", basis->projector_scale()}};
    res = dispatch(name, cfg, out);
  } catch (const ConfigError& e) {
    res.exit_code = kValidation;
    error = e.what();
  } catch (const DomainError& e) {
    res.exit_code = kValidation;
    error = e.what();
  } catch (const NumericalAbort& e) {
    res.exit_code = kNumerical;
    error = e.what();
  } catch (const SolverError& e) {
    res.exit_code = kNumerical;
    error = e.what();
  } catch (const fs::filesystem_error& e) {
    res.exit_code = kValidation;
    error = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["result"] = res.summary;
  manifest["timings"] = res.timings;
  manifest["wallclock"] = wall;
  manifest["timestamp"] = utc_timestamp();
  manifest["exit_status"] = res.exit_code;
  if (!error.empty()) manifest["error"] = error;
  try {
    write_json(out / "manifest.json", manifest);
  } catch (const ConfigError& e) {
    std::cerr << "mkg: " << e.what() << '\n';
  }
  if (!error.empty()) std::cerr << "mkg " << name << ": " << error << '\n';
  if (!quiet) {
    std::cout << name << " [" << out_dir << "] exit " << res.exit_code << ' ' << res.summary.dump() << '\n';
  }
  return res.exit_code;
}

std::vector<long> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size() || v < 0) throw ConfigError("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad --seeds value '" + text + "', expected a..b");
    }
  };
  if (dots == std::string::npos) return {num(text)};
  const long a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
  if (b < a) throw ConfigError("empty --seeds range '" + text + "'");
  std::vector<long> out;
  for (long s = a; s <= b; ++s) out.push_back(s);
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Maxwell-scalar evolution on the Einstein cylinder"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MKG_VERSION);

  std::string config_path, out_dir = "mkg_out", seeds;
  std::vector<std::string> sets;
  bool quiet = false;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file ([section] key = value)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seeds", seeds, "seed or seed range a..b; one output subdirectory per seed");
    sub->add_option("--set", sets, "override section.key=value")->take_all();
    sub->add_flag("--quiet", quiet, "no summary on stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  std::vector<long> seed_list;
  try {
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& s : sets) cfg.assign(s);
    if (!seeds.empty()) seed_list = parse_seed_range(seeds);
  } catch (const ConfigError& e) {
    std::cerr << "mkg " << name << ": " << e.what() << '\n';
    return kValidation;
  }

  if (seed_list.empty()) return run_command(name, cfg, out_dir, quiet);
  int worst = kOk;
  for (long seed : seed_list) {
    RunConfig c = cfg;
    c.set("run.seed", std::to_string(seed));
    worst = std::max(worst, run_command(name, c, (fs::path(out_dir) / ("seed_" + std::to_string(seed))).string(), quiet));
  }
  return worst;
}

}  // namespace mkg::cli
