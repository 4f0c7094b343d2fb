#pragma once

#include "mkg/s3/fields.hpp"

namespace mkg::s3 {

struct PoissonOptions {
  double tol = 1e-10;
  int max_iterations = 300;
};

struct PoissonResult {
  ScalarField u;
  double residual = 0.0;  // ||(-Delta + V) u - s|| / ||s||
  int iterations = 0;
};

// Solves (-Delta + V) u = s in the retained space with V given as real,
// nonnegative collocation values. V identically zero selects the mean-zero
// solution and requires mean(s) = 0 to tolerance. Preconditioned CG with
// the diagonal (k(k+2) + mean V)^{-1}.
PoissonResult solve_screened_poisson_grid(const Eigen::VectorXd& potential, const ScalarField& s,
                                          const PoissonOptions& opts = {});

ScalarField solve_screened_poisson(const ScalarField& potential, const ScalarField& s, double tol = 1e-10);

}  // namespace mkg::s3
