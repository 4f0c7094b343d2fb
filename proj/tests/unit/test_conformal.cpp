#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mkg/conformal/conformal.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/state/gauge.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using namespace mkg;
using namespace mkg::conformal;

namespace {

constexpr double kPi = std::numbers::pi;

evolution::Trajectory homogeneous_run(double delta, double eps = 0.1) {
  evolution::EvolveOptions o;
  o.monitor_commuted = false;
  return evolution::evolve(test::homogeneous(test::basis(2), eps, delta, 0.0), kPi / 2, 1e-3, 10, o);
}

}  // namespace

TEST_SUITE("conformal") {
  TEST_CASE("time coordinates") {
    const CoordinateMap m(1.0);
    CHECK(m.tau_from_eta(0.0) == 0.0);
    CHECK(m.omega(0.0) == 1.0);
    CHECK(m.tau_from_eta(1.0) == doctest::Approx(2.0 * std::atan(std::tanh(0.5))).epsilon(1e-15));
    CHECK(m.tau_from_eta(1.0) == doctest::Approx(0.86577).epsilon(1e-5));
    CHECK(std::abs(m.tau_from_eta(40.0) - kPi / 2) < 1e-15);
    CHECK(m.omega_eta(40.0) < 1e-16);
    const CoordinateMap h2(2.0);
    for (double eta : {-3.0, -0.5, 0.0, 0.7, 2.5, 6.0}) {
      CHECK(std::abs(h2.eta_from_tau(h2.tau_from_eta(eta)) - eta) <= 1e-12 * (1 + std::abs(eta)));
      CHECK(std::abs(h2.boundary_gap(eta) - (kPi / 2 - std::abs(h2.tau_from_eta(eta)))) < 1e-15);
      CHECK(h2.omega(h2.tau_from_eta(eta)) == doctest::Approx(h2.omega_eta(eta)).epsilon(1e-12));
    }
    // Far out only the gap form keeps relative precision.
    CHECK(m.boundary_gap(30.0) == doctest::Approx(2.0 * std::exp(-30.0)).epsilon(1e-12));
  }

  TEST_CASE("static chart") {
    const double h = 1.5;
    const CoordinateMap m(h);
    const StaticPoint hz = m.static_map(0.0, kPi / 2);
    CHECK(hz.r == doctest::Approx(1.0 / h).epsilon(1e-15));
    CHECK(hz.t == 0.0);
    CHECK(hz.region == Region::horizon);
    CHECK(std::abs(m.static_map(0.4, kPi).r) < 1e-15);
    CHECK(m.f(0.0) == 1.0);
    CHECK(std::abs(m.f(1.0 / h)) < 1e-15);
    for (double t : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
      for (double r : {0.0, 0.1, 0.35, 0.6}) {
        const CylinderPoint c = m.from_static(t, r);
        const StaticPoint back = m.static_map(c.tau, c.zeta);
        CHECK(back.region == Region::static_patch);
        CHECK(std::abs(back.t - t) < 1e-12);
        CHECK(std::abs(back.r - r) < 1e-12);
      }
    }
    CHECK(m.static_map(0.2, 0.3).region == Region::outside);
  }

  TEST_CASE("physical fields") {
    const auto b = test::basis(6);
    const PhysicalSlice z = to_physical(state::FieldState::zero(b));
    CHECK(s3::l2_norm(z.phi) == 0.0);
    CHECK(s3::l2_norm(z.a_vec) == 0.0);

    for (double h : {1.0, 2.0}) {
      state::FieldState s = state::random_admissible(b, 0.1, 3, h);
      const PhysicalSlice p = to_physical(s);
      CHECK(p.eta == 0.0);
      CHECK(s3::l2_norm(p.phi - h * s.phi) <= 1e-15 * s3::l2_norm(s.phi) * h);
      const Eigen::VectorXd before = s3::pointwise_norm_sq(s.a_vec), after = s3::pointwise_norm_sq(p.a_vec);
      CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-12);
      state::FieldState phys = s;
      phys.phi = p.phi;
      phys.a0 = p.a_eta;
      phys.phi_dot = h * s.phi_dot;
      const double q = state::sobolev_size(phys, 2) / state::sobolev_size(s, 2);
      CHECK(q >= std::min(1.0, h * h) * (1 - 1e-12));
      CHECK(q <= std::max(1.0, h * h) * (1 + 1e-12));
      if (h == 1.0) CHECK(q == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("decay fits on exact solutions") {
    const s3::S3Point pole = s3::S3Point::from_r4({-1.0, 0.0, 0.0, 0.0});
    // phi = eps sin tau.
    const auto sine = homogeneous_run(-kPi / 2);
    const DecayFit fit = decay_fit(sine, pole);
    CHECK(std::abs(fit.slope + 1.0) <= 0.02);

    // Early window: the fit reproduces the least-squares slope of the closed
    // form H eps tanh(H eta) / cosh(H eta).
    DecayFitOptions early;
    early.eta_min = 2.0;
    early.eta_max = 4.0;
    const DecayFit e = decay_fit(sine, pole, early);
    std::vector<double> x, y;
    for (int i = 0; i < early.samples; ++i) {
      const double eta = 2.0 + 2.0 * i / (early.samples - 1);
      x.push_back(eta);
      y.push_back(std::log(0.1 * std::tanh(eta) / std::cosh(eta)));
    }
    CHECK(std::abs(e.slope - test::ls_slope(x, y)) <= 1e-6);

    // phi = eps cos tau vanishes at the boundary.
    const auto cosine = homogeneous_run(0.0);
    try {
      const DecayFit c = decay_fit(cosine, pole);
      CHECK(std::abs(c.slope + 2.0) <= 0.05);
    } catch (const RateUndefinedError&) {
      CHECK(true);
    }

    evolution::EvolveOptions o;
    o.monitor_commuted = false;
    const auto zero = evolution::evolve(state::FieldState::zero(test::basis(2)), kPi / 2, 1e-2, 10, o);
    CHECK_THROWS_AS(decay_fit(zero, pole), RateUndefinedError);
  }

  TEST_CASE("profile check on the exact sine solution") {
    const auto sine = homogeneous_run(-kPi / 2);
    const ProfileReport r = profile_check(sine);
    CHECK(r.target == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    CHECK(std::abs(r.ratio / r.target - 1.0) <= 0.05);
    CHECK(r.angular_var <= 1e-10);
    ProfileOptions same;
    same.r2 = same.r1 = 0.3;
    CHECK(profile_check(sine, same).ratio == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("eigenmode residual") {
    CHECK(phi1(0.0, 0.0, 1.0) == 1.0);
    CHECK(phi1(0.0, 0.999999, 1.0) * std::sqrt(1.0 - 0.999999 * 0.999999) == doctest::Approx(1.0).epsilon(1e-12));
    const EigenmodeResult r = eigenmode_residual({}, 1.0);
    CHECK(r.max_residual <= 1e-8);
    const EigenmodeResult r2 = eigenmode_residual({}, 2.0);
    CHECK(r2.max_residual <= 1e-8 * 4.0);
    EigenmodeGrid bad;
    bad.r_max = 0.99;
    CHECK_THROWS_AS(eigenmode_residual(bad, 1.0), DomainError);
  }

  TEST_CASE("finite-difference weights") {
    const std::vector<double> x{-2.0, -1.0, 0.0, 1.0, 2.0};
    const auto w = fd_weights(0.0, x, 2);
    // Exact on quartics: f = x^4 - x^3 + 2x.  Weights are indexed [node][order].
    auto f = [](double t) { return t * t * t * t - t * t * t + 2 * t; };
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      d1 += w[j][1] * f(x[j]);
      d2 += w[j][2] * f(x[j]);
    }
    CHECK(d1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(d2) < 1e-13);
  }
}
