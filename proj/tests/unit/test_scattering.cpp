#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mkg/scattering/scattering.hpp"
#include "mkg/state/gauge.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using namespace mkg;
using namespace mkg::scattering;

namespace {

constexpr double kPi = std::numbers::pi;

ScatterOptions fast() {
  ScatterOptions o;
  o.monitor_every = 100;
  o.evolve.monitor_commuted = false;
  return o;
}

FieldState homogeneous_data(const s3::BasisPtr& b, double phi0, double phi1, double tau) {
  FieldState s = FieldState::zero(b, tau);
  s.phi = s3::ScalarField::constant(b, phi0);
  s.phi_dot = s3::ScalarField::constant(b, phi1);
  return s;
}

double const_err(const s3::ScalarField& f, double value) {
  return test::sup_norm(f - s3::ScalarField::constant(f.basis(), value));
}

}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("wave operators on zero and homogeneous data") {
    const auto b = test::basis(2);
    const double eps = 0.1;
    const auto z = wave_forward(FieldState::zero(b), fast());
    CHECK(z.side == Side::future);
    CHECK(state::sobolev_size(z.state, 3) == 0.0);

    const auto c = wave_forward(homogeneous_data(b, eps, 0.0, 0.0), fast());
    CHECK(z.state.tau == kPi / 2);
    CHECK(const_err(c.state.phi, 0.0) <= 1e-8);
    CHECK(const_err(c.state.phi_dot, -eps) <= 1e-8);

    const auto s = wave_forward(homogeneous_data(b, 0.0, eps, 0.0), fast());
    CHECK(const_err(s.state.phi, eps) <= 1e-8);
    CHECK(const_err(s.state.phi_dot, 0.0) <= 1e-8);

    const auto p = wave_backward(homogeneous_data(b, eps, 0.0, 0.0), fast());
    CHECK(p.side == Side::past);
    CHECK(p.state.tau == -kPi / 2);
    CHECK(const_err(p.state.phi_dot, eps) <= 1e-8);

    CHECK_THROWS_AS(wave_forward(homogeneous_data(b, eps, 0.0, 0.3), fast()), ConfigError);
  }

  TEST_CASE("scatter examples") {
    const auto b = test::basis(2);
    const double eps = 0.1;
    const AsymptoticData u_minus{Side::past, homogeneous_data(b, 0.0, eps, -kPi / 2)};
    RunLog log;
    const auto u_plus = scatter(u_minus, fast(), &log);
    CHECK(u_plus.side == Side::future);
    CHECK(const_err(u_plus.state.phi, 0.0) <= 1e-8);
    CHECK(const_err(u_plus.state.phi_dot, -eps) <= 1e-8);
    CHECK(log.steps == 3142);

    const AsymptoticData zero{Side::past, FieldState::zero(b, -kPi / 2)};
    CHECK(state::sobolev_size(scatter(zero, fast()).state, 2) == 0.0);
    CHECK_THROWS_AS(scatter(u_plus, fast()), ConfigError);
    CHECK_THROWS_AS(inverse_scatter(u_minus, fast()), ConfigError);
  }

  TEST_CASE("roundtrip error") {
    CHECK(roundtrip_error(FieldState::zero(test::basis(2)), 2, fast()) == 0.0);
    CHECK(roundtrip_error(test::homogeneous(test::basis(2), 0.1, 0.4, 0.0), 2, fast()) <= 1e-8);
    const auto b = test::basis(4);
    const FieldState u0 = state::random_admissible(b, 0.1, 2);
    CHECK(roundtrip_error(u0, 2, fast()) <= 1e-6);
  }

  TEST_CASE("boundedness and determinism") {
    const auto b = test::basis(4);
    const FieldState u0 = state::random_admissible(b, 0.1, 3);
    RunLog l1, l2;
    const auto a = wave_forward(u0, fast(), &l1);
    const auto c = wave_forward(u0, fast(), &l2);
    CHECK(a.state.phi.coeffs() == c.state.phi.coeffs());
    CHECK(a.state.a_vec[0].coeffs() == c.state.a_vec[0].coeffs());
    const double q = l1.s2_end / l1.s2_start;
    CHECK(q <= 4.0);
    CHECK(q >= 0.25);
  }

  TEST_CASE("scattering report") {
    const auto b = test::basis(4);
    FieldState s = state::random_admissible(b, 0.1, 4);
    s.tau = -kPi / 2;
    const auto rep = scattering_report({Side::past, s}, fast());
    CHECK(rep.ratio >= 0.5);
    CHECK(rep.ratio <= 2.0);
    CHECK(rep.roundtrip_error <= 1e-6);
    const auto j = to_json(rep);
    for (const char* k : {"S2_minus", "S2_plus", "ratio", "roundtrip_error", "steps", "wallclock"}) CHECK(j.contains(k));
  }
}
