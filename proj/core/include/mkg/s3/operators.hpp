#pragma once

#include "mkg/s3/fields.hpp"

namespace mkg::s3 {

// Negative-spectrum Laplace-Beltrami operator: eigenvalue -k(k+2) on degree k.
ScalarField laplacian_scalar(const ScalarField& f);

// X_axis f, axis in {1, 2, 3}; [X_i, X_j] = 2 eps_ijk X_k.
ScalarField frame_derivative(const ScalarField& f, int axis);

OneForm grad(const ScalarField& f);
ScalarField div(const OneForm& a);
// curl = *d with the Hodge star fixed by BasisSpec::orientation; curl sigma^1 = -2 orientation sigma^1.
OneForm curl(const OneForm& a);

// Levi-Civita derivative along X_axis, in frame components.
OneForm covariant_derivative(const OneForm& a, int axis);
// Rough (Bochner) Laplacian sum_i nabla_i nabla_i; equals -2 on sigma^i.
OneForm rough_laplacian(const OneForm& a);

OneForm project_divfree(const OneForm& a);

// Antilinear in the first argument.
Complex l2_inner(const ScalarField& f, const ScalarField& g);
Complex l2_inner(const OneForm& a, const OneForm& b);
// Same inner products evaluated by grid quadrature.
Complex l2_inner_quadrature(const ScalarField& f, const ScalarField& g);
double l2_norm(const ScalarField& f);
double l2_norm(const OneForm& a);

// sum over frame multi-indices |alpha| <= m of ||X_alpha f||^2, m in 0..3.
double sobolev_norm_sq(const ScalarField& f, int m);
double sobolev_norm_sq(const OneForm& a, int m);
// Eigenvalue-multiplier form sum_j<=m (k(k+2))^j |c|^2.
double sobolev_norm_sq_spectral(const ScalarField& f, int m);

// Galerkin product P_K(f g).
ScalarField product(const ScalarField& f, const ScalarField& g);
// Grid values of sum_i |a_i|^2.
Eigen::VectorXd pointwise_norm_sq(const OneForm& a);

}  // namespace mkg::s3
