#pragma once

#include <array>

#include "mkg/s3/fields.hpp"
#include "mkg/state/field_state.hpp"

namespace mkg::elliptic {

using s3::CVector;
using s3::OneForm;
using s3::ScalarField;

// Collocation values of the slice quantities shared by the A0 and A0_dot
// solves and the evolution right-hand side.
struct SliceGrid {
  CVector phi;
  CVector phi_dot;
  std::array<CVector, 3> dphi;      // X_i phi
  std::array<Eigen::VectorXd, 3> a;  // real frame components of A
  Eigen::VectorXd phi_sq;            // |phi|^2

  static SliceGrid from(const ScalarField& phi, const ScalarField& phi_dot, const OneForm& a_vec);
};

struct A0Solution {
  ScalarField raw;
  ScalarField mean_zero;
  double residual = 0.0;
  int iterations = 0;
  // (||grad A0||^2 + ||phi A0||^2) / ||phi_dot||^2 for the raw solution; the
  // elliptic estimate bounds it by 1.
  double l2_ratio = 0.0;
  // Same with ||A0||^2 added.
  double full_ratio = 0.0;
};

// (-Delta + |phi|^2) A0 = -Im(conj(phi) phi_dot).
A0Solution solve_a0(const ScalarField& phi, const ScalarField& phi_dot, double tol = 1e-10);
A0Solution solve_a0(const s3::BasisPtr& basis, const SliceGrid& grid, double tol = 1e-10);

// Mean-zero solution of -Delta A0_dot = -div Im(conj(phi) grad phi) - 2 A . Re(conj(phi) grad phi),
// obtained by eliminating phi_ddot from the differentiated A0 equation.
ScalarField solve_a0_dot(const state::FieldState& s, double tol = 1e-10);
ScalarField solve_a0_dot(const s3::BasisPtr& basis, const SliceGrid& grid, double tol = 1e-10);

// Relative mean of the source above which the solvability policy raises.
inline constexpr double kSolvabilityTolerance = 1e-9;

}  // namespace mkg::elliptic
