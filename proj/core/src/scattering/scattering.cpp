#include "mkg/scattering/scattering.hpp"

#include <cmath>
#include <numbers>

namespace mkg::scattering {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double boundary_tau(Side side) { return side == Side::future ? kHalfPi : -kHalfPi; }

FieldState run(const FieldState& s, double target, const ScatterOptions& opts, RunLog* log) {
  evolution::Trajectory traj = evolution::evolve(s, target, opts.dt, opts.monitor_every, opts.evolve);
  FieldState end = traj.states.back();
  if (log) {
    log->s2_start = traj.monitor_log.front().sobolev[1].total;
    log->s2_end = traj.monitor_log.back().sobolev[1].total;
    log->steps = traj.steps;
    log->wallclock = traj.wallclock;
    log->trajectory = std::move(traj);
  }
  return end;
}

void require_tau(const FieldState& s, double tau, const char* what) {
  if (std::abs(s.tau - tau) > 1e-12) {
    throw ConfigError(std::string(what) + ": state must sit at tau = " + std::to_string(tau) + ", got " +
                      std::to_string(s.tau));
  }
}

}  // namespace

AsymptoticData wave_forward(const FieldState& u0, const ScatterOptions& opts, RunLog* log) {
  require_tau(u0, 0.0, "wave_forward");
  return {Side::future, run(u0, kHalfPi, opts, log)};
}

AsymptoticData wave_backward(const FieldState& u0, const ScatterOptions& opts, RunLog* log) {
  require_tau(u0, 0.0, "wave_backward");
  return {Side::past, run(u0, -kHalfPi, opts, log)};
}

FieldState inverse_wave(const AsymptoticData& u, const ScatterOptions& opts, RunLog* log) {
  require_tau(u.state, boundary_tau(u.side), "inverse_wave");
  return run(u.state, 0.0, opts, log);
}

AsymptoticData scatter(const AsymptoticData& u_minus, const ScatterOptions& opts, RunLog* log) {
  if (u_minus.side != Side::past) throw ConfigError("scatter expects past asymptotic data");
  require_tau(u_minus.state, -kHalfPi, "scatter");
  return {Side::future, run(u_minus.state, kHalfPi, opts, log)};
}

AsymptoticData inverse_scatter(const AsymptoticData& u_plus, const ScatterOptions& opts, RunLog* log) {
  if (u_plus.side != Side::future) throw ConfigError("inverse_scatter expects future asymptotic data");
  require_tau(u_plus.state, kHalfPi, "inverse_scatter");
  return {Side::past, run(u_plus.state, -kHalfPi, opts, log)};
}

double roundtrip_error(const FieldState& u0, int m, const ScatterOptions& opts) {
  const double size = std::sqrt(state::sobolev_size(u0, m));
  if (size == 0.0) return 0.0;
  const FieldState back = inverse_wave(wave_forward(u0, opts), opts);
  return state::sobolev_distance(back, u0, m, true) / size;
}

ScatteringReport scattering_report(const AsymptoticData& u_minus, const ScatterOptions& opts) {
  ScatteringReport r;
  RunLog fwd, bwd;
  const AsymptoticData u_plus = scatter(u_minus, opts, &fwd);
  const AsymptoticData back = inverse_scatter(u_plus, opts, &bwd);
  r.s2_minus = fwd.s2_start;
  r.s2_plus = fwd.s2_end;
  r.ratio = r.s2_minus > 0.0 ? std::sqrt(r.s2_plus / r.s2_minus) : 0.0;
  const double size = std::sqrt(r.s2_minus);
  r.roundtrip_error = size > 0.0 ? state::sobolev_distance(back.state, u_minus.state, 2, true) / size : 0.0;
  r.steps = fwd.steps + bwd.steps;
  r.wallclock = fwd.wallclock + bwd.wallclock;
  return r;
}

nlohmann::json to_json(const ScatteringReport& r) {
  return {{"S2_minus", r.s2_minus},       {"S2_plus", r.s2_plus}, {"ratio", r.ratio},
          {"roundtrip_error", r.roundtrip_error}, {"steps", r.steps},     {"wallclock", r.wallclock}};
}

}  // namespace mkg::scattering
