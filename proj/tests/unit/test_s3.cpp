#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mkg/errors.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/s3/oracles.hpp"
#include "mkg/s3/poisson.hpp"
#include "mkg/s3/quadrature.hpp"
#include "mkg/s3/snapshot.hpp"
#include "oracles.hpp"
#include "test_common.hpp"

using namespace mkg;
using namespace mkg::s3;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField cos_zeta(const BasisPtr& b) { return test::coordinate_field(b, 0); }

std::vector<test::Vec4> random_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<test::Vec4> out;
  for (int i = 0; i < n; ++i) {
    test::Vec4 x{g(rng), g(rng), g(rng), g(rng)};
    const double r = std::sqrt(test::dot(x, x));
    for (auto& v : x) v /= r;
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_SUITE("s3_spectral") {
  TEST_CASE("basis spec validation") {
    BasisSpec bad;
    bad.band_limit = 0;
    CHECK_THROWS_AS(Basis::create(bad), ConfigError);
    const auto b = test::basis(8);
    CHECK(b->num_modes() == num_modes_for(8));
    CHECK(b->num_modes() == 285);
    CHECK(b->frame_constant() == 2.0);
  }

  TEST_CASE("gauss-legendre exactness") {
    const auto rule = gauss_legendre(6);
    for (int p = 0; p <= 11; ++p) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(q - exact) < 1e-14);
    }
  }

  TEST_CASE("transform round trip") {
    const auto b = test::basis(8);
    const ScalarField f = random_field(b, 3, 8, false);
    const ScalarField g = ScalarField::from_values(b, f.values());
    CHECK((g.coeffs() - f.coeffs()).norm() <= 1e-12 * f.coeffs().norm());
    const CVector v = f.values();
    CHECK((ScalarField::from_values(b, v).values() - v).norm() <= 1e-12 * v.norm());
  }

  TEST_CASE("quadrature integrates products of retained harmonics") {
    const auto b = test::basis(6);
    for (unsigned s = 0; s < 3; ++s) {
      const ScalarField f = random_field(b, 10 + s, 6, false), g = random_field(b, 20 + s, 6, false);
      const Complex coeff = f.coeffs().dot(g.coeffs());
      CHECK(std::abs(l2_inner_quadrature(f, g) - coeff) <= 1e-12 * f.coeffs().norm() * g.coeffs().norm());
    }
  }

  TEST_CASE("laplacian examples") {
    const auto b = test::basis(8);
    CHECK(l2_norm(laplacian_scalar(ScalarField::constant(b, 1.0))) < 1e-13);
    const ScalarField cz = cos_zeta(b);
    CHECK(l2_norm(laplacian_scalar(cz) + 3.0 * cz) < 1e-12);
    for (int k = 0; k <= 4; ++k) {
      for (int a = 0; a <= k; ++a) {
        for (bool c : {false, true}) {
          const ScalarField y = harmonic_polynomial(b, a, k - a, c);
          const double lambda = -static_cast<double>(k * (k + 2));
          CHECK(l2_norm(laplacian_scalar(y) - lambda * y) <= 1e-10 * l2_norm(y));
        }
      }
    }
  }

  TEST_CASE("laplacian against the coordinate finite-difference oracle") {
    const auto b = test::basis(8);
    CHECK(laplacian_fd_order(random_field(b, 5, 4, false), 0.02) >= 1.9);
    // Richardson-extrapolated coordinate Laplacian of a degree-k harmonic
    // reproduces the eigenvalue -k(k+2) at an interior point.
    for (int k = 1; k <= 4; ++k) {
      const ScalarField y = harmonic_polynomial(b, 1, k - 1, true);
      const PointFunction f = [&](double z, double t, double p) { return y.at(S3Point::from_hyperspherical(z, t, p)); };
      const double z = 1.1, t = 0.9, p = 0.4;
      const Complex l1 = coordinate_laplacian_fd(f, z, t, p, 0.01), l2 = coordinate_laplacian_fd(f, z, t, p, 0.005);
      const Complex lap = (4.0 * l2 - l1) / 3.0;
      const Complex val = f(z, t, p);
      CHECK(std::abs(lap / val + static_cast<double>(k * (k + 2))) < 1e-6);
    }
  }

  TEST_CASE("frame derivative examples") {
    const auto b = test::basis(8);
    for (int i = 1; i <= 3; ++i) CHECK(l2_norm(frame_derivative(ScalarField::constant(b, 1.0), i)) < 1e-13);
    const ScalarField cz = cos_zeta(b);
    ScalarField sum(b);
    for (int i = 1; i <= 3; ++i) sum += frame_derivative(frame_derivative(cz, i), i);
    CHECK(l2_norm(sum + 3.0 * cz) < 1e-12);
    const ScalarField f = random_field(b, 7, 8, false), g = random_field(b, 8, 8, false);
    for (int i = 1; i <= 3; ++i) {
      const Complex lhs = l2_inner_quadrature(frame_derivative(f, i), g);
      const Complex rhs = -l2_inner_quadrature(f, frame_derivative(g, i));
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(lhs));
    }
  }

  TEST_CASE("frame fields are pointwise orthonormal and tangent") {
    const auto b = test::basis(4);
    const test::AmbientFrame frame(b);
    for (const auto& x : random_points(10, 42)) {
      for (int i = 0; i < 3; ++i) {
        const auto vi = frame.at(i, x);
        CHECK(std::abs(test::dot(vi, x)) < 1e-13);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(test::dot(vi, frame.at(j, x)) - (i == j ? 1.0 : 0.0)) < 1e-13);
      }
    }
  }

  TEST_CASE("frame commutators [X_i, X_j] = 2 eps_ijk X_k by ambient differences") {
    const auto b = test::basis(4);
    const test::AmbientFrame frame(b);
    for (const auto& x : random_points(5, 7)) {
      for (auto [i, j, k] : {std::array{0, 1, 2}, std::array{1, 2, 0}, std::array{2, 0, 1}}) {
        const auto br = test::lie_bracket_fd(frame, i, j, x, 1e-5);
        const auto vk = frame.at(k, x);
        for (int a = 0; a < 4; ++a) CHECK(std::abs(br[a] - 2.0 * vk[a]) < 1e-8);
      }
    }
  }

  TEST_CASE("grad, div and curl") {
    const auto b = test::basis(8);
    const ScalarField f = random_field(b, 11, 8, true);
    CHECK(l2_norm(curl(grad(f))) <= 1e-11 * std::sqrt(sobolev_norm_sq_spectral(f, 2)));

    // |grad cos zeta| = |sin zeta| pointwise.
    const Eigen::VectorXd n2 = pointwise_norm_sq(grad(cos_zeta(b)));
    double err = 0.0;
    for (int g = 0; g < b->grid_size(); ++g) {
      const double x1 = b->grid_point(g).r4()[0];
      err = std::max(err, std::abs(n2[g] - (1.0 - x1 * x1)));
    }
    CHECK(err < 1e-12);

    // Maurer-Cartan: d sigma^1 (X_2, X_3) = -sigma^1([X_2, X_3]), so the
    // curl eigenvalue is minus the bracket constant (orientation +1).
    const test::AmbientFrame frame(test::basis(4));
    const test::Vec4 x{0.3, -0.5, 0.7, std::sqrt(1.0 - 0.09 - 0.25 - 0.49)};
    const double bracket = test::dot(test::lie_bracket_fd(frame, 1, 2, x, 1e-5), frame.at(0, x));
    const OneForm s1 = coframe(b, 1);
    const double lambda = l2_inner(s1, curl(s1)).real() / l2_inner(s1, s1).real();
    CHECK(std::abs(lambda + bracket * b->orientation()) < 1e-8);
    CHECK(std::abs(std::abs(lambda) - 2.0) < 1e-12);
    CHECK(l2_norm(curl(s1) - lambda * s1) < 1e-12);
  }

  TEST_CASE("adjointness of grad and div") {
    const auto b = test::basis(8);
    const ScalarField f = random_field(b, 12, 8, true);
    const OneForm a = random_one_form(b, 13, 8);
    const Complex lhs = l2_inner(grad(f), a), rhs = -l2_inner(f, div(a));
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(lhs));
  }

  TEST_CASE("divergence-free projection") {
    const auto b = test::basis(8);
    const ScalarField f = random_field(b, 14, 8, true);
    const OneForm s1 = coframe(b, 1);
    CHECK(l2_norm(project_divfree(grad(f))) <= 1e-11 * l2_norm(grad(f)));
    CHECK(l2_norm(project_divfree(s1) - s1) <= 1e-11 * l2_norm(s1));
    CHECK(l2_norm(project_divfree(s1 + grad(f)) - s1) <= 1e-11 * l2_norm(s1));
    // Any divergence-free field is reproduced.
    const OneForm c = curl(random_one_form(b, 15, 7));
    CHECK(l2_norm(div(c)) <= 1e-11 * l2_norm(c));
    CHECK(l2_norm(project_divfree(c) - c) <= 1e-11 * l2_norm(c));
    // curl curl sigma^1 = 4 sigma^1.
    CHECK(l2_norm(curl(curl(s1)) - 4.0 * s1) <= 1e-11 * l2_norm(s1));
    // rough Laplacian on sigma^1.
    CHECK(l2_norm(rough_laplacian(s1) + 2.0 * s1) <= 1e-12 * l2_norm(s1));
  }

  TEST_CASE("screened poisson examples") {
    const auto b = test::basis(8);
    const double eps = 0.1, c = 0.7;
    const ScalarField u =
        solve_screened_poisson(ScalarField::constant(b, eps * eps), ScalarField::constant(b, -eps * eps * c), 1e-12);
    CHECK(l2_norm(u - ScalarField::constant(b, -c)) < 1e-11);
    const ScalarField y1 = cos_zeta(b);
    const ScalarField zero(b);
    CHECK(l2_norm(solve_screened_poisson(zero, y1, 1e-12) - (1.0 / 3.0) * y1) < 1e-11);
    CHECK(l2_norm(solve_screened_poisson(zero, zero, 1e-12)) == 0.0);
    // Variable potential: residual check.
    const ScalarField v = ScalarField::from_values(b, random_field(b, 16, 3, true).values().cwiseAbs().cast<Complex>());
    const ScalarField s = random_field(b, 17, 8, false);
    const ScalarField w = solve_screened_poisson(v, s, 1e-12);
    CHECK(l2_norm(-1.0 * laplacian_scalar(w) + product(v, w) - s) <= 1e-10 * l2_norm(s));
  }

  TEST_CASE("inner products and sobolev norms") {
    const auto b = test::basis(8);
    const ScalarField one = ScalarField::constant(b, 1.0), cz = cos_zeta(b);
    CHECK(std::abs(l2_inner(one, one).real() - 2.0 * kPi * kPi) < 1e-12);
    CHECK(std::abs(l2_inner(cz, cz).real() - kPi * kPi / 2.0) < 1e-12);
    for (int k = 0; k <= 5; ++k) {
      const ScalarField y = harmonic_polynomial(b, k, 0, false);
      const double l2 = l2_inner(y, y).real();
      CHECK(std::abs(sobolev_norm_sq(y, 1) - (1.0 + k * (k + 2)) * l2) <= 1e-11 * l2 * (1 + k * (k + 2)));
    }
    const ScalarField f = random_field(b, 18, 8, false);
    for (int m = 0; m < 3; ++m) CHECK(sobolev_norm_sq(f, m) <= sobolev_norm_sq(f, m + 1));
    const ScalarField g = random_field(b, 19, 8, false);
    CHECK(std::abs(l2_inner_quadrature(f, g) - l2_inner(f, g)) <= 1e-12 * l2_norm(f) * l2_norm(g));
    CHECK_THROWS_AS(sobolev_norm_sq(f, 4), UnsupportedOrderError);
  }

  TEST_CASE("snapshot round trip") {
    const auto b = test::basis(5);
    Snapshot snap;
    snap.basis = b->spec();
    snap.c0 = b->projector_shift();
    snap.s0 = b->projector_scale();
    snap.attributes["tau"] = 0.25;
    snap.arrays.push_back({"phi", random_field(b, 20, 5, false).coeffs()});
    const auto path = (std::filesystem::temp_directory_path() / "mkg_unit_snapshot.mkgsnap").string();
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    CHECK(back.basis == snap.basis);
    CHECK(back.attributes["tau"] == 0.25);
    CHECK((back.array("phi") - snap.arrays[0].second).norm() == 0.0);
    std::filesystem::remove(path);
  }

  TEST_CASE("op-check suite passes") {
    const auto rep = run_op_check(test::basis(8), 1);
    for (const auto& c : rep.checks) {
      INFO(c.name << " = " << c.value);
      CHECK(c.pass);
    }
  }
}
