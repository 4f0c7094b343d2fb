#include "mkg/s3/poisson.hpp"

#include <cmath>
#include <numbers>

#include "mkg/errors.hpp"

namespace mkg::s3 {

PoissonResult solve_screened_poisson_grid(const Eigen::VectorXd& V, const ScalarField& s,
                                          const PoissonOptions& opts) {
  const BasisPtr& basis = s.basis();
  const Basis& b = *basis;
  if (V.size() != b.grid_size()) throw ConfigError("screened Poisson: potential grid size mismatch");

  const double vmax = V.size() ? V.maxCoeff() : 0.0;
  const double vmin = V.size() ? V.minCoeff() : 0.0;
  if (!std::isfinite(vmax) || !std::isfinite(vmin)) throw DomainError("screened Poisson: non-finite potential");
  if (vmin < -1e-13 * std::max(1.0, vmax)) throw DomainError("screened Poisson: negative potential");

  PoissonResult res{ScalarField(basis), 0.0, 0};
  const double snorm = s.coeffs().norm();
  if (snorm == 0.0) return res;

  const int nm = b.num_modes();
  const CVector& rhs = s.coeffs();

  if (vmax <= 0.0) {
    // Mean-zero branch: -Delta is diagonal.
    if (std::abs(rhs[0]) > std::max(opts.tol, 1e-14) * snorm) {
      throw DomainError("screened Poisson: V = 0 requires a mean-zero source");
    }
    CVector u = CVector::Zero(nm);
    for (int i = 1; i < nm; ++i) u[i] = rhs[i] / (-b.laplacian_eigenvalue(i));
    res.u = ScalarField(basis, std::move(u));
    return res;
  }

  const double vmean = b.integrate(V.cast<Complex>()).real() / (2.0 * std::numbers::pi * std::numbers::pi);
  Eigen::VectorXd precond(nm);
  for (int i = 0; i < nm; ++i) precond[i] = 1.0 / (-b.laplacian_eigenvalue(i) + vmean);

  auto apply = [&](const CVector& p) {
    CVector vp = b.synthesize(p);
    vp.array() *= V.array();
    CVector out = b.analyze(vp);
    for (int i = 0; i < nm; ++i) out[i] -= b.laplacian_eigenvalue(i) * p[i];
    return out;
  };

  CVector x = CVector::Zero(nm);
  CVector r = rhs;
  CVector z = (precond.array() * r.array()).matrix();
  CVector p = z;
  Complex rz = r.dot(z);
  double rnorm = r.norm();
  int it = 0;
  while (rnorm > opts.tol * snorm) {
    if (it >= opts.max_iterations) {
      throw SolverError("screened Poisson: no convergence", rnorm / snorm, it);
    }
    const CVector Ap = apply(p);
    const Complex pAp = p.dot(Ap);
    if (!(std::abs(pAp) > 0.0)) throw SolverError("screened Poisson: breakdown", rnorm / snorm, it);
    const Complex alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    rnorm = r.norm();
    ++it;
    z = (precond.array() * r.array()).matrix();
    const Complex rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    if (!std::isfinite(rnorm)) throw SolverError("screened Poisson: non-finite residual", rnorm, it);
  }
  res.residual = rnorm / snorm;
  res.iterations = it;
  res.u = ScalarField(basis, std::move(x));
  return res;
}

ScalarField solve_screened_poisson(const ScalarField& potential, const ScalarField& s, double tol) {
  require_same_basis(potential.basis(), s.basis());
  const CVector v = potential.values();
  const double vmax = v.cwiseAbs().maxCoeff();
  if (v.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, vmax)) {
    throw DomainError("screened Poisson: potential must be real");
  }
  PoissonOptions opts;
  opts.tol = tol;
  return solve_screened_poisson_grid(v.real(), s, opts).u;
}

}  // namespace mkg::s3
