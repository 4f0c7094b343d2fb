#include "mkg/state/gauge.hpp"

#include <cmath>
#include <random>

#include "mkg/elliptic/a0.hpp"
#include "mkg/errors.hpp"
#include "mkg/s3/operators.hpp"
#include "mkg/s3/poisson.hpp"

namespace mkg::state {

using s3::Complex;
using s3::CVector;

namespace {

CVector gaussian_coeffs(const s3::Basis& b, std::mt19937_64& rng, int max_degree) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector c = CVector::Zero(b.num_modes());
  for (int i = 0; i < b.num_modes(); ++i) {
    const double re = n(rng);
    const double im = n(rng);
    if (b.mode(i).k <= max_degree) c[i] = Complex(re, im);
  }
  return c;
}

}  // namespace

RawData random_raw_data(const BasisPtr& basis, double amplitude, std::uint64_t seed, int max_degree) {
  if (!(amplitude >= 0.0)) throw ConfigError("amplitude must be >= 0");
  const s3::Basis& b = *basis;
  if (max_degree < 0 || max_degree > b.band_limit()) max_degree = b.band_limit();
  std::mt19937_64 rng(seed);
  RawData d;
  d.phi0 = ScalarField(basis, gaussian_coeffs(b, rng, max_degree));
  d.phi1 = ScalarField(basis, gaussian_coeffs(b, rng, max_degree));
  d.a_raw = OneForm(basis);
  d.a_dot_raw = OneForm(basis);
  for (int i = 0; i < 3; ++i) d.a_raw[i] = ScalarField(basis, gaussian_coeffs(b, rng, max_degree)).real_part();
  for (int i = 0; i < 3; ++i) d.a_dot_raw[i] = ScalarField(basis, gaussian_coeffs(b, rng, max_degree)).real_part();

  const double total = s3::sobolev_norm_sq(d.phi0, 2) + s3::sobolev_norm_sq(d.phi1, 1) +
                       s3::sobolev_norm_sq(d.a_raw, 2) + s3::sobolev_norm_sq(d.a_dot_raw, 1);
  const double scale = total > 0.0 ? amplitude / std::sqrt(total) : 0.0;
  d.phi0 *= scale;
  d.phi1 *= scale;
  d.a_raw *= scale;
  d.a_dot_raw *= scale;
  return d;
}

GaugeFixed coulomb_fix(const OneForm& a_vec, const OneForm& a_vec_dot, const ScalarField& phi,
                       const ScalarField& phi_dot, double tol) {
  const BasisPtr& basis = phi.basis();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(basis->grid_size());
  s3::PoissonOptions opts;
  opts.tol = tol;

  // -Delta chi = div A (mean of div A vanishes identically).
  ScalarField src = s3::div(a_vec);
  src.coeffs()[0] = 0.0;
  ScalarField src_dot = s3::div(a_vec_dot);
  src_dot.coeffs()[0] = 0.0;

  GaugeFixed g;
  g.chi = s3::solve_screened_poisson_grid(zero, src, opts).u.real_part();
  g.chi_dot = s3::solve_screened_poisson_grid(zero, src_dot, opts).u.real_part();
  g.a_vec = (a_vec + s3::grad(g.chi)).real_part();
  g.a_vec_dot = (a_vec_dot + s3::grad(g.chi_dot)).real_part();

  const CVector chi = g.chi.values();
  const CVector chi_dot = g.chi_dot.values();
  const CVector p = phi.values();
  const CVector pd = phi_dot.values();
  const CVector rot = (chi.real().array() * Complex(0.0, -1.0)).exp().matrix();
  g.phi = ScalarField::from_values(basis, (rot.array() * p.array()).matrix());
  const CVector dot =
      (rot.array() * (pd.array() - Complex(0.0, 1.0) * chi_dot.real().array().cast<Complex>() * p.array())).matrix();
  g.phi_dot = ScalarField::from_values(basis, dot);
  return g;
}

FieldState make_admissible(const ScalarField& phi0, const ScalarField& phi1, const OneForm& a_raw,
                           const OneForm& a_dot_raw, double hubble, double tol, AdmissibleInfo* info) {
  if (!(hubble > 0.0)) throw ConfigError("hubble must be > 0");
  const BasisPtr& basis = phi0.basis();
  FieldState s;
  s.tau = 0.0;
  s.hubble = hubble;
  s.phi = phi0;
  s.phi_dot = phi1;
  s.a_vec = s3::project_divfree(a_raw).real_part();
  s.a_vec_dot = s3::project_divfree(a_dot_raw).real_part();

  elliptic::SliceGrid grid;
  grid.phi = s.phi.values();
  grid.phi_dot = s.phi_dot.values();
  grid.phi_sq = grid.phi.cwiseAbs2();
  elliptic::A0Solution a0 = elliptic::solve_a0(basis, grid, tol);

  AdmissibleInfo local;
  const double phi_sq_max = grid.phi_sq.size() ? grid.phi_sq.maxCoeff() : 0.0;
  if (phi_sq_max > 0.0) {
    // (-Delta + |phi0|^2) w = |phi0|^2 has w = 1; solved rather than assumed.
    s3::PoissonOptions opts;
    opts.tol = tol;
    const ScalarField src = ScalarField::from_values(basis, grid.phi_sq.cast<Complex>());
    const ScalarField w = s3::solve_screened_poisson_grid(grid.phi_sq, src, opts).u.real_part();
    const double mean_w = w.mean().real();
    if (mean_w > 1e-14) {
      local.shift = a0.raw.mean().real() / mean_w;
      local.shift_applied = true;
      s.phi_dot = s.phi_dot + Complex(0.0, local.shift) * s.phi;
      grid.phi_dot = s.phi_dot.values();
      a0 = elliptic::solve_a0(basis, grid, tol);
    }
  }
  s.a0 = a0.mean_zero;
  if (info) *info = local;
  return s;
}

FieldState make_admissible(const RawData& raw, double hubble, double tol) {
  return make_admissible(raw.phi0, raw.phi1, raw.a_raw, raw.a_dot_raw, hubble, tol);
}

FieldState random_admissible(const BasisPtr& basis, double amplitude, std::uint64_t seed, double hubble,
                             int max_degree, double tol) {
  if (!(amplitude >= 0.0)) throw ConfigError("amplitude must be >= 0");
  const RawData unit = random_raw_data(basis, 1.0, seed, max_degree);
  auto build = [&](double scale) {
    RawData d = unit;
    d.phi0 *= scale;
    d.phi1 *= scale;
    d.a_raw *= scale;
    d.a_dot_raw *= scale;
    return make_admissible(d, hubble, tol);
  };
  if (amplitude == 0.0) return build(0.0);
  auto size = [](const FieldState& s) { return std::sqrt(sobolev_size(s, 2)); };

  double x0 = amplitude;
  FieldState s = build(x0);
  double f0 = size(s) - amplitude;
  double x1 = x0 * amplitude / size(s);
  for (int it = 0; it < 20; ++it) {
    s = build(x1);
    const double f1 = size(s) - amplitude;
    if (std::abs(f1) <= 1e-12 * amplitude) return s;
    const double next = f1 == f0 ? x1 : x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = next;
  }
  throw SolverError("random_admissible: amplitude iteration did not converge", std::abs(size(s) - amplitude), 20);
}

}  // namespace mkg::state
