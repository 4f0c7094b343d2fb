#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "mkg/energies/energies.hpp"
#include "mkg/evolution/evolution.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/s3/oracles.hpp"
#include "mkg/state/gauge.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using namespace mkg;
using namespace mkg::evolution;
using s3::Complex;
using state::FieldState;

namespace {

constexpr double kPi = std::numbers::pi;

double state_distance(const FieldState& a, const FieldState& b) {
  return s3::l2_norm(a.phi - b.phi) + s3::l2_norm(a.phi_dot - b.phi_dot) + s3::l2_norm(a.a_vec - b.a_vec) +
         s3::l2_norm(a.a_vec_dot - b.a_vec_dot);
}

EvolveOptions quiet_options() {
  EvolveOptions o;
  o.monitor_commuted = false;
  return o;
}

FieldState from_gauge(const state::GaugeFixed& g, double tau) {
  FieldState s = FieldState::zero(g.phi.basis(), tau);
  s.phi = g.phi;
  s.phi_dot = g.phi_dot;
  s.a_vec = g.a_vec;
  s.a_vec_dot = g.a_vec_dot;
  return s;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("rhs examples") {
    const auto b = test::basis(6);
    const Derivative z = rhs(FieldState::zero(b));
    CHECK(s3::l2_norm(z.phi_ddot) == 0.0);
    CHECK(s3::l2_norm(z.a_ddot) == 0.0);

    const double eps = 0.1;
    FieldState s = FieldState::zero(b);
    s.phi = s3::ScalarField::constant(b, eps);
    const Derivative d = rhs(s);
    CHECK(s3::l2_norm(d.phi_ddot - s3::ScalarField::constant(b, -eps)) < 1e-14);
    CHECK(s3::l2_norm(d.a_ddot) < 1e-14);

    FieldState m = FieldState::zero(b);
    m.a_vec = eps * s3::coframe(b, 1);
    CHECK(s3::l2_norm(rhs(m).a_ddot + 4.0 * eps * s3::coframe(b, 1)) < 1e-13);
  }

  TEST_CASE("rhs rejects a constraint violation") {
    const auto b = test::basis(6);
    FieldState s = state::random_admissible(b, 0.1, 1);
    s.a_vec += s3::grad(s3::random_field(b, 2, 4, true));
    CHECK_THROWS_AS(rhs(s), NumericalAbort);
  }

  TEST_CASE("step_rk4 examples") {
    const auto b = test::basis(4);
    const FieldState z = step_rk4(FieldState::zero(b), 0.01);
    CHECK(s3::l2_norm(z.phi) == 0.0);
    CHECK(s3::l2_norm(z.a_vec) == 0.0);

    const double eps = 0.1;
    const FieldState s = step_rk4(test::homogeneous(b, eps, 0.0, 0.0), 0.01);
    CHECK(test::sup_norm(s.phi - s3::ScalarField::constant(b, eps * std::cos(0.01))) <= 1e-12 * eps);
    CHECK(s.tau == doctest::Approx(0.01));

    CHECK_THROWS_AS(step_rk4(s, 1.0), ConfigError);
  }

  TEST_CASE("step_rk4 is fourth order over half a period") {
    const auto b = test::basis(2);
    const double eps = 0.1;
    // phi = eps sin(tau + pi/2) from -pi/2: exact end state (0, -eps).
    auto half_period_error = [&](double dt) {
      const auto traj = evolve(test::homogeneous(b, eps, 0.0, -kPi / 2), kPi / 2, dt, 1000000, quiet_options());
      const FieldState& e = traj.states.back();
      return std::max(test::sup_norm(e.phi), test::sup_norm(e.phi_dot + s3::ScalarField::constant(b, eps)));
    };
    const double e1 = half_period_error(kPi / 40), e2 = half_period_error(kPi / 80);
    const double ratio = e1 / e2;
    INFO("half-period errors " << e1 << " " << e2);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }

  TEST_CASE("evolve basics") {
    const auto b = test::basis(4);
    const auto one = evolve(test::homogeneous(b, 0.1, 0.0, 0.3), 0.3, 1e-3, 10, quiet_options());
    CHECK(one.states.size() == 1);
    CHECK(one.steps == 0);

    const auto traj = evolve(test::homogeneous(b, 0.1, 0.0, 0.0), kPi / 2, 1e-3, 50, quiet_options());
    const FieldState& end = traj.states.back();
    CHECK(end.tau == kPi / 2);
    CHECK(test::sup_norm(end.phi) <= 1e-8);
    CHECK(test::sup_norm(end.phi_dot + s3::ScalarField::constant(b, 0.1)) <= 1e-8);
    CHECK(traj.states.size() == traj.monitor_log.size());
    // 1570 full steps plus the landing step.
    CHECK(traj.steps == 1571);
  }

  TEST_CASE("time reversibility") {
    const auto b = test::basis(4);
    const FieldState s0 = state::random_admissible(b, 0.1, 3);
    const auto fwd = evolve(s0, 0.5, 1e-3, 100, quiet_options());
    const auto back = evolve(fwd.states.back(), 0.0, 1e-3, 100, quiet_options());
    const double d = state::sobolev_distance(back.states.back(), s0, 2, false);
    CHECK(d <= 1e-8 * std::sqrt(state::sobolev_size(s0, 2)));
  }

  TEST_CASE("constraint propagation") {
    const auto b = test::basis(6);
    const FieldState s0 = state::random_admissible(b, 0.1, 4);
    const auto traj = evolve(s0, 0.3, 1e-3, 20, quiet_options());
    for (const auto& s : traj.states) {
      CHECK(s3::l2_norm(s3::div(s.a_vec)) <= 1e-8 * std::sqrt(s3::sobolev_norm_sq(s.a_vec, 1)));
      CHECK(std::abs(s.a0.mean()) <= 1e-10);
    }
  }

  TEST_CASE("gauge covariance") {
    // Low degrees keep the gauge-rotated data resolved: the exp(-i f) tail
    // beyond K = 8 is of size |f|^7/7!.
    const auto b = test::basis(8);
    const FieldState s0 = state::random_admissible(b, 0.1, 5, 1.0, 2);
    s3::ScalarField f = s3::random_field(b, 6, 1, true);
    f = (0.1 / test::sup_norm(f)) * f;
    // Time-independent gauge transformation A + df, exp(-i f) phi.
    const s3::CVector rot = (f.values().real().array() * Complex(0.0, -1.0)).exp().matrix();
    const s3::ScalarField gphi = s3::ScalarField::from_values(b, (rot.array() * s0.phi.values().array()).matrix());
    const s3::ScalarField gphi_dot = s3::ScalarField::from_values(b, (rot.array() * s0.phi_dot.values().array()).matrix());
    const auto fixed = state::coulomb_fix(s0.a_vec + s3::grad(f), s0.a_vec_dot, gphi, gphi_dot, 1e-12);
    FieldState g0 = from_gauge(fixed, 0.0);
    g0.a0 = s0.a0;

    const auto ev_g = evolve(g0, 0.2, 1e-3, 1000, quiet_options()).states.back();
    const auto ev = evolve(s0, 0.2, 1e-3, 1000, quiet_options()).states.back();
    const auto fixed_end = state::coulomb_fix(ev.a_vec, ev.a_vec_dot, ev.phi, ev.phi_dot, 1e-12);
    FieldState e = from_gauge(fixed_end, ev.tau);
    e.a0 = ev.a0;
    CHECK(state::sobolev_distance(ev_g, e, 2, true) <= 1e-7);
  }

  TEST_CASE("field residuals") {
    const auto b = test::basis(4);
    const auto hom = evolve(test::homogeneous(b, 0.1, 0.0, 0.0), 0.5, 1e-3, 10, quiet_options());
    double scalar = 0.0, maxwell = 0.0;
    for (const auto& r : field_residuals(hom)) {
      scalar = std::max(scalar, r.scalar);
      maxwell = std::max(maxwell, r.maxwell);
    }
    CHECK(maxwell <= 1e-10);
    // Central second difference at spacing h: h^2/12 sup|phi''''| ||1||.
    const double h = 1e-2;
    CHECK(scalar <= h * h / 12.0 * 0.1 * std::sqrt(2.0) * kPi * 1.01);

    const auto zero = evolve(FieldState::zero(b), 0.1, 1e-3, 10, quiet_options());
    for (const auto& r : field_residuals(zero)) {
      CHECK(r.scalar == 0.0);
      CHECK(r.maxwell == 0.0);
    }

    const FieldState s0 = state::random_admissible(b, 0.1, 7);
    auto peak = [](const Trajectory& t) {
      double m = 0.0;
      for (const auto& r : field_residuals(t)) m = std::max(m, r.scalar + r.maxwell);
      return m;
    };
    const double coarse = peak(evolve(s0, 0.2, 1e-3, 20, quiet_options()));
    const double fine = peak(evolve(s0, 0.2, 1e-3, 10, quiet_options()));
    INFO("residual ratio " << coarse / fine);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);

    CHECK_THROWS_AS(field_residuals(evolve(s0, 0.0, 1e-3, 10, quiet_options())), ConfigError);
  }

  TEST_CASE("blow-up guard keeps the partial trajectory") {
    const auto b = test::basis(4);
    EvolveOptions o = quiet_options();
    o.blowup_factor = 1.0 + 1e-9;
    const FieldState s0 = state::random_admissible(b, 0.1, 8);
    try {
      evolve(s0, 0.5, 1e-3, 5, o);
      FAIL("expected a blow-up abort");
    } catch (const BlowUpError& e) {
      CHECK(!e.partial().states.empty());
      CHECK(e.partial().states.back().tau < 0.5);
    }
  }

  TEST_CASE("checkpoint and resume") {
    const auto b = test::basis(4);
    const auto dir = std::filesystem::temp_directory_path() / "mkg_unit_ckpt";
    std::filesystem::remove_all(dir);
    EvolveOptions o = quiet_options();
    o.checkpoint_dir = dir.string();
    const FieldState s0 = state::random_admissible(b, 0.1, 9);
    evolve(s0, 0.05, 1e-3, 10, o);
    CHECK(latest_checkpoint_index(dir.string()) == 5);

    int index = 0;
    const FieldState r = resume_checkpoint(dir.string(), &index, b);
    CHECK(index == 5);
    CHECK(r.tau == doctest::Approx(0.05));
    o.checkpoint_start_index = index;
    const auto resumed = evolve(r, 0.1, 1e-3, 10, o);
    const auto straight = evolve(s0, 0.1, 1e-3, 10, quiet_options());
    CHECK(state_distance(resumed.states.back(), straight.states.back()) <= 1e-14);
    CHECK(latest_checkpoint_index(dir.string()) == 10);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("energies") {
  using namespace mkg::energies;

  TEST_CASE("geometric energy examples") {
    const auto b = test::basis(6);
    CHECK(energy_phi(FieldState::zero(b)) == 0.0);
    CHECK(energy_A(FieldState::zero(b)) == 0.0);
    const double eps = 0.1;
    for (double tau : {0.0, 0.4, 1.3}) {
      CHECK(energy_phi(test::homogeneous(b, eps, 0.0, tau)) == doctest::Approx(kPi * kPi * eps * eps).epsilon(1e-13));
    }
    FieldState s = FieldState::zero(b);
    s.a_vec = eps * s3::coframe(b, 1);
    CHECK(energy_A(s) == doctest::Approx(4.0 * kPi * kPi * eps * eps).epsilon(1e-13));
    // Against the discrete rough Laplacian: 1/2 ||nabla s||^2 = -1/2 <s, rough s>.
    const double grad_sq = -s3::l2_inner(s.a_vec, s3::rough_laplacian(s.a_vec)).real();
    CHECK(0.5 * grad_sq + s3::l2_inner(s.a_vec, s.a_vec).real() == doctest::Approx(energy_A(s)).epsilon(1e-13));
  }

  TEST_CASE("commuted energies") {
    const auto b = test::basis(6);
    for (int m : {1, 2}) {
      CHECK(commuted_energy(test::homogeneous(b, 0.1, 0.3, 0.2), m).total < 1e-28);
      CHECK(commuted_energy(FieldState::zero(b), m).total == 0.0);
    }
    for (unsigned seed = 1; seed <= 3; ++seed) {
      const FieldState s = state::random_admissible(b, 0.1, seed);
      const double e = energy_phi(s) + commuted_energy(s, 1).scalar;
      const double s2 = sobolev_energy(s, 2).phi;
      CHECK(e / s2 <= 3.0);
      CHECK(e / s2 >= 1.0 / 3.0);
    }
  }

  TEST_CASE("sobolev energies") {
    const auto b = test::basis(6);
    CHECK(sobolev_energy(FieldState::zero(b), 2).total == 0.0);
    const double eps = 0.1;
    CHECK(sobolev_energy(test::homogeneous(b, eps, 0.0, 0.0), 1).phi ==
          doctest::Approx(2.0 * kPi * kPi * eps * eps).epsilon(1e-13));
    const FieldState s = state::random_admissible(b, 0.1, 4);
    CHECK(sobolev_energy(s, 1).total <= sobolev_energy(s, 2).total);
    CHECK(sobolev_energy(s, 2).total <= sobolev_energy(s, 3).total);
    CHECK(sobolev_energy(s, 2).total == doctest::Approx(state::sobolev_size(s, 2)).epsilon(1e-13));
    CHECK_THROWS_AS(sobolev_energy(s, 4), UnsupportedOrderError);
  }

  TEST_CASE("equivalence report") {
    const auto b = test::basis(4);
    EvolveOptions o;
    const auto hom = evolve(test::homogeneous(b, 0.1, 0.0, 0.0), 0.5, 1e-3, 50, o);
    const auto rep = equivalence_report(hom);
    CHECK(std::abs(rep.s_ratio_min[0] - 1.0) <= 1e-8);
    CHECK(std::abs(rep.s_ratio_max[0] - 1.0) <= 1e-8);

    const auto zero = evolve(FieldState::zero(b), 0.05, 1e-3, 10, o);
    const auto zr = equivalence_report(zero);
    CHECK(zr.guard_triggered);
    CHECK(zr.max_drift == 0.0);
  }

  TEST_CASE("energy conservation and sector exchange") {
    const auto b = test::basis(6);
    const FieldState s0 = state::random_admissible(b, 0.1, 5);
    const auto traj = evolve(s0, 0.4, 1e-3, 20, quiet_options());
    double lo = 1e300, hi = -1e300;
    for (const auto& r : traj.monitor_log) {
      lo = std::min(lo, r.e_phi);
      hi = std::max(hi, r.e_phi);
      CHECK(r.e_a / (r.sobolev[0].a_vec + r.sobolev[0].a0) <= 3.0);
      CHECK(r.e_a / (r.sobolev[0].a_vec + r.sobolev[0].a0) >= 1.0 / 3.0);
    }
    const auto rep = equivalence_report(traj);
    CHECK(rep.max_drift <= 1e-6);
    const double e0 = traj.monitor_log.front().e_total;
    CHECK((hi - lo) / e0 >= 10.0 * rep.max_drift);
  }

  TEST_CASE("energy csv") {
    EnergyReport r;
    r.tau = 0.5;
    r.e_phi = 1.0;
    CHECK(energy_csv_header().rfind("tau,", 0) == 0);
    CHECK(energy_csv_row(r).rfind("0.5,1,", 0) == 0);
  }
}
