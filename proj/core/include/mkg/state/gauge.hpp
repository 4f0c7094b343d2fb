#pragma once

#include <cstdint>

#include "mkg/state/field_state.hpp"

namespace mkg::state {

struct RawData {
  ScalarField phi0;
  ScalarField phi1;
  OneForm a_raw;
  OneForm a_dot_raw;
};

// Gaussian coefficients with a flat spectrum up to degree max_degree (band
// limit when negative), scaled so that ||phi0||_{H2}^2 + ||phi1||_{H1}^2 +
// ||A||_{H2}^2 + ||A_dot||_{H1}^2 = amplitude^2. Deterministic per seed.
RawData random_raw_data(const BasisPtr& basis, double amplitude, std::uint64_t seed, int max_degree = -1);

struct GaugeFixed {
  OneForm a_vec;
  OneForm a_vec_dot;
  ScalarField phi;
  ScalarField phi_dot;
  ScalarField chi;      // gauge function at the slice
  ScalarField chi_dot;  // its tau derivative; A0 shifts by chi_dot
};

// Coulomb gauge fix: chi, chi_dot solve Delta chi = -div A, Delta chi_dot = -div A_dot;
// A' = A + grad chi, phi' = exp(-i chi) phi, phi_dot' = exp(-i chi)(phi_dot - i chi_dot phi).
GaugeFixed coulomb_fix(const OneForm& a_vec, const OneForm& a_vec_dot, const ScalarField& phi,
                       const ScalarField& phi_dot, double tol = 1e-12);

struct AdmissibleInfo {
  double shift = 0.0;  // c in phi1 <- phi1 + i c phi0
  bool shift_applied = false;
};

FieldState make_admissible(const ScalarField& phi0, const ScalarField& phi1, const OneForm& a_raw,
                           const OneForm& a_dot_raw, double hubble, double tol = 1e-12,
                           AdmissibleInfo* info = nullptr);
FieldState make_admissible(const RawData& raw, double hubble, double tol = 1e-12);

// Admissible state from random_raw_data(seed) rescaled so that
// sqrt(S_2) = amplitude to relative precision 1e-12 (secant iteration on the
// raw scale; the A0 solve makes the map from raw scale to S_2 nonlinear).
FieldState random_admissible(const BasisPtr& basis, double amplitude, std::uint64_t seed, double hubble = 1.0,
                             int max_degree = -1, double tol = 1e-12);

}  // namespace mkg::state
