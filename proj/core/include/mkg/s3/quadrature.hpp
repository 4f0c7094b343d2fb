#pragma once

#include <vector>

namespace mkg::s3 {

struct GaussRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
GaussRule gauss_legendre(int n);

// Jacobi polynomial P_n^{(alpha,beta)}(x) by three-term recurrence.
double jacobi(int n, double alpha, double beta, double x);

// d/dx P_n^{(alpha,beta)}(x).
double jacobi_derivative(int n, double alpha, double beta, double x);

}  // namespace mkg::s3
