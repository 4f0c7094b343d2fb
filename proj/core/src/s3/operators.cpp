#include "mkg/s3/operators.hpp"

#include <string>
#include <vector>

#include "mkg/errors.hpp"

namespace mkg::s3 {

namespace {

int checked_axis(int axis) {
  if (axis < 1 || axis > 3) throw ConfigError("frame axis must be 1, 2 or 3 (got " + std::to_string(axis) + ")");
  return axis - 1;
}

int eps3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

void check_order(int m) {
  if (m < 0 || m > 3) throw UnsupportedOrderError("Sobolev order must be in 0..3 (got " + std::to_string(m) + ")");
}

}  // namespace

ScalarField laplacian_scalar(const ScalarField& f) {
  const Basis& b = *f.basis();
  CVector c = f.coeffs();
  for (int i = 0; i < b.num_modes(); ++i) c[i] *= b.laplacian_eigenvalue(i);
  return ScalarField(f.basis(), std::move(c));
}

ScalarField frame_derivative(const ScalarField& f, int axis) {
  const int a = checked_axis(axis);
  CVector out;
  f.basis()->apply_frame(a, f.coeffs(), out);
  return ScalarField(f.basis(), std::move(out));
}

OneForm grad(const ScalarField& f) {
  return {frame_derivative(f, 1), frame_derivative(f, 2), frame_derivative(f, 3)};
}

ScalarField div(const OneForm& a) {
  ScalarField d = frame_derivative(a[0], 1);
  d += frame_derivative(a[1], 2);
  d += frame_derivative(a[2], 3);
  return d;
}

OneForm curl(const OneForm& a) {
  const Basis& b = *a.basis();
  const double c = b.frame_constant();
  const double o = b.orientation();
  OneForm r(a.basis());
  for (int k = 0; k < 3; ++k) {
    ScalarField acc = (-c) * a[k];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int e = eps3(k, i, j);
        if (e == 0) continue;
        acc += static_cast<double>(e) * frame_derivative(a[j], i + 1);
      }
    }
    r[k] = o * acc;
  }
  return r;
}

OneForm covariant_derivative(const OneForm& a, int axis) {
  const int i = checked_axis(axis);
  const double half_c = 0.5 * a.basis()->frame_constant();
  OneForm r(a.basis());
  for (int k = 0; k < 3; ++k) {
    r[k] = frame_derivative(a[k], axis);
    for (int j = 0; j < 3; ++j) {
      const int e = eps3(i, j, k);
      if (e != 0) r[k] += (half_c * e) * a[j];
    }
  }
  return r;
}

OneForm rough_laplacian(const OneForm& a) {
  OneForm r(a.basis());
  for (int i = 1; i <= 3; ++i) r += covariant_derivative(covariant_derivative(a, i), i);
  return r;
}

OneForm project_divfree(const OneForm& a) {
  require_same_basis(a[0].basis(), a[1].basis());
  require_same_basis(a[0].basis(), a[2].basis());
  std::array<CVector, 3> in{a[0].coeffs(), a[1].coeffs(), a[2].coeffs()}, out;
  a.basis()->apply_projector(in, out);
  return {ScalarField(a.basis(), std::move(out[0])), ScalarField(a.basis(), std::move(out[1])),
          ScalarField(a.basis(), std::move(out[2]))};
}

Complex l2_inner(const ScalarField& f, const ScalarField& g) {
  require_same_basis(f.basis(), g.basis());
  return f.coeffs().dot(g.coeffs());
}

Complex l2_inner(const OneForm& a, const OneForm& b) {
  Complex s{0.0, 0.0};
  for (int i = 0; i < 3; ++i) s += l2_inner(a[i], b[i]);
  return s;
}

Complex l2_inner_quadrature(const ScalarField& f, const ScalarField& g) {
  require_same_basis(f.basis(), g.basis());
  const CVector fv = f.values(), gv = g.values();
  return f.basis()->integrate((fv.conjugate().array() * gv.array()).matrix());
}

double l2_norm(const ScalarField& f) { return f.coeffs().norm(); }

double l2_norm(const OneForm& a) {
  return std::sqrt(a[0].coeffs().squaredNorm() + a[1].coeffs().squaredNorm() + a[2].coeffs().squaredNorm());
}

double sobolev_norm_sq(const ScalarField& f, int m) {
  check_order(m);
  const Basis& b = *f.basis();
  std::vector<CVector> level{f.coeffs()};
  double total = f.coeffs().squaredNorm();
  for (int order = 1; order <= m; ++order) {
    std::vector<CVector> next;
    next.reserve(level.size() * 3);
    for (const CVector& g : level) {
      for (int axis = 0; axis < 3; ++axis) {
        CVector d;
        b.apply_frame(axis, g, d);
        total += d.squaredNorm();
        next.push_back(std::move(d));
      }
    }
    level = std::move(next);
  }
  return total;
}

double sobolev_norm_sq(const OneForm& a, int m) {
  return sobolev_norm_sq(a[0], m) + sobolev_norm_sq(a[1], m) + sobolev_norm_sq(a[2], m);
}

double sobolev_norm_sq_spectral(const ScalarField& f, int m) {
  check_order(m);
  const Basis& b = *f.basis();
  double total = 0.0;
  for (int i = 0; i < b.num_modes(); ++i) {
    const double lam = -b.laplacian_eigenvalue(i);
    double w = 0.0, p = 1.0;
    for (int j = 0; j <= m; ++j) {
      w += p;
      p *= lam;
    }
    total += w * std::norm(f.coeffs()[i]);
  }
  return total;
}

ScalarField product(const ScalarField& f, const ScalarField& g) {
  require_same_basis(f.basis(), g.basis());
  const CVector v = (f.values().array() * g.values().array()).matrix();
  return ScalarField::from_values(f.basis(), v);
}

Eigen::VectorXd pointwise_norm_sq(const OneForm& a) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(a.basis()->grid_size());
  for (int i = 0; i < 3; ++i) s += a[i].values().cwiseAbs2();
  return s;
}

}  // namespace mkg::s3
