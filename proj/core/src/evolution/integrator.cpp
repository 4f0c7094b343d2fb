#include <chrono>
#include <cmath>
#include <numbers>

#include "mkg/elliptic/a0.hpp"
#include "mkg/evolution/evolution.hpp"
#include "mkg/evolution/packed.hpp"
#include "mkg/s3/operators.hpp"

namespace mkg::evolution {

using detail::PackedState;

namespace {

// Replaces A and A_dot by the real parts of their projections. Corrections
// beyond round-off mean the constraint was lost and are not absorbed.
void reproject(const s3::BasisPtr& basis, PackedState& y, double gate) {
  const int n = basis->num_modes();
  for (int base : {2, 5}) {
    OneForm a(basis);
    for (int i = 0; i < 3; ++i) a[i].coeffs() = y.segment((base + i) * n, n);
    const OneForm pa = s3::project_divfree(a).real_part();
    const double corr = s3::l2_norm(pa - a);
    if (corr > gate * s3::l2_norm(a) + 1e-13) {
      throw NumericalAbort("post-step projection correction " + std::to_string(corr) + " exceeds round-off");
    }
    for (int i = 0; i < 3; ++i) y.segment((base + i) * n, n) = pa[i].coeffs();
  }
}

PackedState step_packed(const s3::BasisPtr& basis, const PackedState& y, double h, const StepOptions& opts) {
  const PackedState k1 = detail::rhs_packed(basis, y, opts.rhs);
  const PackedState k2 = detail::rhs_packed(basis, y + (0.5 * h) * k1, opts.rhs);
  const PackedState k3 = detail::rhs_packed(basis, y + (0.5 * h) * k2, opts.rhs);
  const PackedState k4 = detail::rhs_packed(basis, y + h * k3, opts.rhs);
  PackedState out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  reproject(basis, out, opts.projection_gate);
  return out;
}

FieldState finish(const s3::BasisPtr& basis, const PackedState& y, double tau, double hubble, double tol) {
  FieldState s = detail::unpack(basis, y, tau, hubble);
  s.a0 = elliptic::solve_a0(s.phi, s.phi_dot, tol).mean_zero;
  return s;
}

void check_step(const s3::Basis& basis, double dt, double cfl) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive and finite");
  const double limit = max_step(basis, cfl);
  if (dt > limit * (1.0 + 1e-12)) {
    throw ConfigError("time step " + std::to_string(dt) + " violates the CFL limit " + std::to_string(limit));
  }
}

}  // namespace

double max_step(const s3::Basis& basis, double cfl) { return cfl / (basis.spec().band_limit + 1); }

FieldState step_rk4(const FieldState& s, double dt, const StepOptions& opts) {
  const auto& basis = s.basis();
  check_step(*basis, std::abs(dt), opts.cfl);
  const PackedState y = step_packed(basis, detail::pack(s), dt, opts);
  return finish(basis, y, s.tau + dt, s.hubble, opts.rhs.elliptic_tol);
}

Trajectory evolve(const FieldState& s, double tau_target, double dt, int monitor_every, const EvolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& basis = s.basis();
  check_step(*basis, dt, opts.step.cfl);
  if (monitor_every < 1) throw ConfigError("monitor_every must be at least 1");
  if (!std::isfinite(tau_target) || std::abs(tau_target) > std::numbers::pi / 2 + dt) {
    throw ConfigError("tau_target must lie within [-pi/2 - dt, pi/2 + dt]");
  }

  const double span = std::abs(tau_target - s.tau);
  const double dir = tau_target >= s.tau ? 1.0 : -1.0;
  long full = static_cast<long>(std::floor(span / dt + 1e-9));
  double rem = span - static_cast<double>(full) * dt;
  if (rem < 1e-9 * dt) rem = 0.0;
  const long total = full + (rem > 0.0 ? 1 : 0);

  Trajectory traj;
  traj.step_size = dt;
  int ckpt = opts.checkpoint_start_index;

  double s2_initial = 0.0;
  auto record = [&](const FieldState& st) {
    traj.states.push_back(st);
    traj.monitor_log.push_back(energies::energy_report(st, opts.monitor_commuted));
    const auto& rep = traj.monitor_log.back();
    if (!opts.checkpoint_dir.empty()) write_checkpoint_sample(opts.checkpoint_dir, ckpt++, st, rep);
    const double s2 = rep.sobolev[1].total;
    if (traj.states.size() == 1) s2_initial = s2;
    if (!std::isfinite(s2) || (s2_initial > 0.0 && s2 > opts.blowup_factor * s2_initial)) {
      traj.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      throw BlowUpError("blow-up detected at tau = " + std::to_string(st.tau) + ": S2 = " + std::to_string(s2),
                        std::move(traj));
    }
  };

  record(s);
  PackedState y = detail::pack(s);
  for (long i = 1; i <= total; ++i) {
    const bool landing = i > full;
    const double h = dir * (landing ? rem : dt);
    y = step_packed(basis, y, h, opts.step);
    ++traj.steps;
    if (!y.allFinite()) {
      traj.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      throw BlowUpError("non-finite state after step " + std::to_string(i), std::move(traj));
    }
    if (i == total || i % monitor_every == 0) {
      const double tau = i == total ? tau_target : s.tau + dir * static_cast<double>(i) * dt;
      record(finish(basis, y, tau, s.hubble, opts.step.rhs.elliptic_tol));
    }
  }
  traj.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

}  // namespace mkg::evolution
