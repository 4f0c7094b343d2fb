#include "mkg/elliptic/a0.hpp"
#include "mkg/evolution/evolution.hpp"
#include "mkg/evolution/packed.hpp"
#include "mkg/s3/operators.hpp"

namespace mkg::evolution {

using s3::Complex;
using s3::CVector;

namespace detail {

PackedState pack(const FieldState& s) {
  const int n = s.basis()->num_modes();
  CVector y(8 * n);
  y.segment(0, n) = s.phi.coeffs();
  y.segment(n, n) = s.phi_dot.coeffs();
  for (int i = 0; i < 3; ++i) {
    y.segment((2 + i) * n, n) = s.a_vec[i].coeffs();
    y.segment((5 + i) * n, n) = s.a_vec_dot[i].coeffs();
  }
  return y;
}

ScalarField slot(const s3::BasisPtr& b, const PackedState& y, int k) {
  const int n = b->num_modes();
  return ScalarField(b, y.segment(k * n, n));
}

FieldState unpack(const s3::BasisPtr& b, const PackedState& y, double tau, double hubble) {
  FieldState s;
  s.tau = tau;
  s.hubble = hubble;
  s.phi = slot(b, y, 0);
  s.phi_dot = slot(b, y, 1);
  s.a_vec = OneForm(slot(b, y, 2), slot(b, y, 3), slot(b, y, 4));
  s.a_vec_dot = OneForm(slot(b, y, 5), slot(b, y, 6), slot(b, y, 7));
  s.a0 = ScalarField(b);
  return s;
}

PackedState rhs_packed(const s3::BasisPtr& basis, const PackedState& y, const RhsOptions& opts, Derivative* full) {
  const s3::Basis& b = *basis;
  const int n = b.num_modes();
  const Complex I{0.0, 1.0};

  const ScalarField phi = slot(basis, y, 0);
  const ScalarField phi_dot = slot(basis, y, 1);
  const OneForm a(slot(basis, y, 2), slot(basis, y, 3), slot(basis, y, 4));
  const OneForm a_dot(slot(basis, y, 5), slot(basis, y, 6), slot(basis, y, 7));

  const double div_a = s3::l2_norm(s3::div(a));
  const double scale = 1.0 + std::sqrt(s3::sobolev_norm_sq_spectral(a[0], 1) + s3::sobolev_norm_sq_spectral(a[1], 1) +
                                       s3::sobolev_norm_sq_spectral(a[2], 1));
  if (div_a > opts.constraint_limit * scale) {
    throw NumericalAbort("Coulomb constraint violated in right-hand side: ||div A|| = " + std::to_string(div_a));
  }

  elliptic::SliceGrid g;
  g.phi = phi.values();
  g.phi_dot = phi_dot.values();
  for (int i = 0; i < 3; ++i) {
    g.dphi[i] = s3::frame_derivative(phi, i + 1).values();
    g.a[i] = a[i].values().real();
  }
  g.phi_sq = g.phi.cwiseAbs2();

  const ScalarField a0 = elliptic::solve_a0(basis, g, opts.elliptic_tol).mean_zero;
  const ScalarField a0_dot = elliptic::solve_a0_dot(basis, g, opts.elliptic_tol);
  const Eigen::ArrayXd a0v = a0.values().real().array();
  const Eigen::ArrayXd a0dv = a0_dot.values().real().array();

  Eigen::ArrayXd asq = Eigen::ArrayXd::Zero(b.grid_size());
  Eigen::ArrayXcd nl = -2.0 * I * a0v.cast<Complex>() * g.phi_dot.array();
  for (int i = 0; i < 3; ++i) {
    asq += g.a[i].array().square();
    nl += 2.0 * I * g.a[i].array().cast<Complex>() * g.dphi[i].array();
  }
  nl -= ((asq - a0v.square()).cast<Complex>() + I * a0dv.cast<Complex>()) * g.phi.array();

  ScalarField phi_ddot = s3::laplacian_scalar(phi) - phi + ScalarField::from_values(basis, nl.matrix());

  OneForm source(basis);
  for (int i = 0; i < 3; ++i) {
    const Eigen::ArrayXd si =
        g.phi_sq.array() * g.a[i].array() + (g.phi.conjugate().array() * g.dphi[i].array()).imag();
    source[i] = ScalarField::from_values(basis, si.cast<Complex>().matrix());
  }
  const OneForm a_ddot = s3::rough_laplacian(a) - 2.0 * a - s3::project_divfree(source).real_part();

  PackedState dy(8 * n);
  dy.segment(0, n) = phi_dot.coeffs();
  dy.segment(n, n) = phi_ddot.coeffs();
  for (int i = 0; i < 3; ++i) {
    dy.segment((2 + i) * n, n) = a_dot[i].coeffs();
    dy.segment((5 + i) * n, n) = a_ddot[i].coeffs();
  }
  if (full) {
    full->phi_dot = phi_dot;
    full->phi_ddot = phi_ddot;
    full->a_dot = a_dot;
    full->a_ddot = a_ddot;
    full->a0 = a0;
    full->a0_dot = a0_dot;
  }
  return dy;
}

}  // namespace detail

Derivative rhs(const FieldState& s, const RhsOptions& opts) {
  Derivative d;
  detail::rhs_packed(s.basis(), detail::pack(s), opts, &d);
  return d;
}

}  // namespace mkg::evolution
