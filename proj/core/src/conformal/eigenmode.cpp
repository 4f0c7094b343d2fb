#include <cmath>

#include "mkg/conformal/conformal.hpp"
#include "mkg/errors.hpp"

namespace mkg::conformal {

double phi1(double t, double r, double hubble) {
  return std::exp(-hubble * t) / std::sqrt(1.0 - hubble * hubble * r * r);
}

// Fornberg's recursion.
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k > 0; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k > 0; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

EigenmodeResult eigenmode_residual(const EigenmodeGrid& grid, double hubble) {
  if (!(hubble > 0.0)) throw DomainError("Hubble constant must be positive");
  if (grid.n_t < 2 || grid.n_r < 2 || grid.order < 2 || grid.order % 2 != 0 || !(grid.t_max > grid.t_min) ||
      !(grid.r_max > 0.0)) {
    throw ConfigError("eigenmode grid needs n_t, n_r >= 2, an even order >= 2 and nonempty ranges");
  }
  const double h2 = hubble * hubble;
  const double r_max = grid.r_max / hubble;
  const double hr = r_max / (grid.n_r - 1);
  const double ht = (grid.t_max - grid.t_min) / hubble / (grid.n_t - 1);
  const int half = grid.order / 2;
  // Stencils reach half*hr past the last node; Phi1 is evaluated there in closed form.
  if (grid.r_max > 0.95 || hubble * (r_max + half * hr) >= 1.0) {
    throw DomainError("eigenmode grid must stay 0.05/H away from the horizon r = 1/H");
  }

  std::vector<double> offsets;
  for (int k = -half; k <= half; ++k) offsets.push_back(k);
  const auto w = fd_weights(0.0, offsets, 2);

  auto radial = [&](double r) { return 1.0 / std::sqrt(1.0 - h2 * r * r); };
  EigenmodeResult res;
  for (int i = 0; i < grid.n_r; ++i) {
    const double r = i * hr;
    double g1 = 0.0, g2 = 0.0;
    for (int k = -half; k <= half; ++k) {
      // Phi1 is even in r, so the stencil may cross r = 0.
      const double g = radial(std::abs(r + k * hr));
      g1 += w[k + half][1] * g;
      g2 += w[k + half][2] * g;
    }
    g1 /= hr;
    g2 /= hr * hr;
    const double f = 1.0 - h2 * r * r;
    const double radial_term = i == 0 ? 2.0 * g2 : f * g2 + (-2.0 * h2 * r) * g1 + f * g1 / r;
    const double g0 = radial(r);
    for (int j = 0; j < grid.n_t; ++j) {
      const double t = grid.t_min / hubble + j * ht;
      double e2 = 0.0;
      for (int k = -half; k <= half; ++k) e2 += w[k + half][2] * std::exp(-hubble * (t + k * ht));
      e2 /= ht * ht;
      const double e0 = std::exp(-hubble * t);
      const double op = g0 * e2 / f - radial_term * e0 + 2.0 * h2 * g0 * e0;
      const double resid = std::abs(op - h2 * g0 * e0);
      if (resid > res.max_residual) res = {resid, t, r};
    }
  }
  return res;
}

}  // namespace mkg::conformal
