#include "mkg/elliptic/a0.hpp"

#include <cmath>

#include "mkg/errors.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/s3/poisson.hpp"

namespace mkg::elliptic {

using s3::Complex;

SliceGrid SliceGrid::from(const ScalarField& phi, const ScalarField& phi_dot, const OneForm& a_vec) {
  SliceGrid g;
  g.phi = phi.values();
  g.phi_dot = phi_dot.values();
  for (int i = 0; i < 3; ++i) {
    g.dphi[i] = s3::frame_derivative(phi, i + 1).values();
    g.a[i] = a_vec[i].values().real();
  }
  g.phi_sq = g.phi.cwiseAbs2();
  return g;
}

A0Solution solve_a0(const s3::BasisPtr& basis, const SliceGrid& g, double tol) {
  const CVector charge = (g.phi.conjugate().array() * g.phi_dot.array()).imag().cast<Complex>().matrix();
  const ScalarField rhs = -ScalarField::from_values(basis, charge);

  s3::PoissonOptions opts;
  opts.tol = tol;
  s3::PoissonResult pr = s3::solve_screened_poisson_grid(g.phi_sq, rhs, opts);

  A0Solution out;
  out.raw = pr.u.real_part();
  out.residual = pr.residual;
  out.iterations = pr.iterations;
  out.mean_zero = out.raw - ScalarField::constant(basis, out.raw.mean());

  const double phidot_sq = basis->integrate(g.phi_dot.cwiseAbs2().cast<Complex>()).real();
  if (phidot_sq > 0.0) {
    const CVector a0v = out.raw.values();
    const double grad_sq = -s3::l2_inner(out.raw, s3::laplacian_scalar(out.raw)).real();
    const double pa_sq = basis->integrate((g.phi_sq.array() * a0v.cwiseAbs2().array()).cast<Complex>().matrix()).real();
    out.l2_ratio = (grad_sq + pa_sq) / phidot_sq;
    out.full_ratio = (grad_sq + pa_sq + out.raw.coeffs().squaredNorm()) / phidot_sq;
  }
  return out;
}

A0Solution solve_a0(const ScalarField& phi, const ScalarField& phi_dot, double tol) {
  s3::require_same_basis(phi.basis(), phi_dot.basis());
  SliceGrid g;
  g.phi = phi.values();
  g.phi_dot = phi_dot.values();
  g.phi_sq = g.phi.cwiseAbs2();
  return solve_a0(phi.basis(), g, tol);
}

ScalarField solve_a0_dot(const s3::BasisPtr& basis, const SliceGrid& g, double tol) {
  OneForm current(basis);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(basis->grid_size());
  for (int i = 0; i < 3; ++i) {
    const CVector pd = (g.phi.conjugate().array() * g.dphi[i].array()).matrix();
    current[i] = ScalarField::from_values(basis, pd.imag().cast<Complex>());
    q.array() += 2.0 * g.a[i].array() * pd.real().array();
  }
  ScalarField rhs = -s3::div(current) - ScalarField::from_values(basis, q.cast<Complex>());

  const double norm = rhs.coeffs().norm();
  if (norm == 0.0) return ScalarField(basis);
  const double mean_part = std::abs(rhs.coeffs()[0]);
  if (mean_part > kSolvabilityTolerance * norm) {
    throw SolverError("A0_dot source violates solvability (constraint drift)", mean_part / norm);
  }
  rhs.coeffs()[0] = 0.0;

  s3::PoissonOptions opts;
  opts.tol = tol;
  return s3::solve_screened_poisson_grid(Eigen::VectorXd::Zero(basis->grid_size()), rhs, opts).u.real_part();
}

ScalarField solve_a0_dot(const state::FieldState& s, double tol) {
  return solve_a0_dot(s.basis(), SliceGrid::from(s.phi, s.phi_dot, s.a_vec), tol);
}

}  // namespace mkg::elliptic
