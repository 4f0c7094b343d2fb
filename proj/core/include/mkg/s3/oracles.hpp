#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkg/s3/fields.hpp"

// Independent checks of the spectral operators, shared by the op-check
// command and the test suites. Nothing here goes through the frame algebra:
// the coordinate oracles only use point evaluation.
namespace mkg::s3 {

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // pass when value >= tolerance instead of <=
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_pass() const;
  const OracleCheck& at(const std::string& name) const;
};

nlohmann::json to_json(const OracleReport& r);

using PointFunction = std::function<Complex(double zeta, double theta, double phi)>;

// Laplace-Beltrami operator in hyperspherical coordinates, assembled as
// g^{ij}(d_i d_j f - Gamma^k_ij d_k f) from the Christoffel symbols of
// d zeta^2 + sin^2 zeta (d theta^2 + sin^2 theta d phi^2), with second-order
// central differences of step h.
Complex coordinate_laplacian_fd(const PointFunction& f, double zeta, double theta, double phi, double h);

// Degree a + b homogeneous harmonic polynomial z1^a z2^b, or z1^a conj(z2)^b,
// restricted to the sphere and sampled on the grid.
ScalarField harmonic_polynomial(const BasisPtr& basis, int a, int b, bool conjugate_second);

// Random coefficients up to max_degree; real fields when real is set.
ScalarField random_field(const BasisPtr& basis, std::uint64_t seed, int max_degree, bool real);
OneForm random_one_form(const BasisPtr& basis, std::uint64_t seed, int max_degree);

// Observed order of coordinate_laplacian_fd against laplacian_scalar over
// the steps h, h/2, h/4 at a few interior points (minimum of the two ratios).
double laplacian_fd_order(const ScalarField& f, double h);

OracleReport run_op_check(const BasisPtr& basis, std::uint64_t seed = 1);

}  // namespace mkg::s3
