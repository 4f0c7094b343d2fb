#include "mkg/s3/basis.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "mkg/errors.hpp"
#include "mkg/s3/quadrature.hpp"

namespace mkg::s3 {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool fft_friendly(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

int min_n_xi(int degree) {
  int n = degree + 1;
  while (!fft_friendly(n)) ++n;
  return n;
}

int min_n_u(int degree) { return (degree / 2 + 2) / 2; }

// x^e for e >= 0; callers guarantee e >= 0 whenever the prefactor is nonzero.
double ipow(double x, int e) { return e <= 0 ? 1.0 : std::pow(x, e); }

Complex zpow(Complex z, int m) {
  Complex r{1.0, 0.0};
  const Complex b = m >= 0 ? z : std::conj(z);
  for (int i = 0; i < std::abs(m); ++i) r *= b;
  return r;
}

int eps3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace

BasisSpec BasisSpec::resolved() const {
  BasisSpec r = *this;
  if (r.band_limit < 1) throw ConfigError("band_limit must be >= 1");
  if (r.dealias_degree == 0) r.dealias_degree = 4 * r.band_limit;
  if (r.dealias_degree < 2 * r.band_limit + 1) {
    throw ConfigError("dealias_degree must be >= 2K+1 (got " + std::to_string(r.dealias_degree) + ")");
  }
  const int need_xi = min_n_xi(r.dealias_degree);
  const int need_u = min_n_u(r.dealias_degree);
  if (r.grid_shape.n_xi == 0) r.grid_shape.n_xi = need_xi;
  if (r.grid_shape.n_u == 0) r.grid_shape.n_u = need_u;
  if (r.grid_shape.n_xi < r.dealias_degree + 1 || r.grid_shape.n_u < need_u) {
    throw ConfigError("grid_shape too small for dealias_degree " + std::to_string(r.dealias_degree));
  }
  if (r.orientation != 1 && r.orientation != -1) throw ConfigError("orientation must be +1 or -1");
  if (r.frame_normalization != 2.0) {
    throw ConfigError("frame_normalization must be 2 (orthonormal unit-quaternion frame)");
  }
  return r;
}

S3Point S3Point::from_hopf(double eta, double xi1, double xi2) {
  return {std::polar(std::cos(eta), xi1), std::polar(std::sin(eta), xi2)};
}

S3Point S3Point::from_hyperspherical(double zeta, double theta, double phi) {
  const double s = std::sin(zeta);
  return {Complex(std::cos(zeta), s * std::cos(theta)),
          Complex(s * std::sin(theta) * std::cos(phi), s * std::sin(theta) * std::sin(phi))};
}

S3Point S3Point::from_r4(const std::array<double, 4>& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
  if (!(r > 0.0)) throw DomainError("S3Point::from_r4: zero vector");
  return {Complex(x[0] / r, x[1] / r), Complex(x[2] / r, x[3] / r)};
}

std::array<double, 4> S3Point::r4() const { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }

struct Basis::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::shared_ptr<const Basis> Basis::create(const BasisSpec& spec) {
  return std::shared_ptr<const Basis>(new Basis(spec.resolved()));
}

Basis::Basis(const BasisSpec& resolved) : spec_(resolved), plans_(std::make_unique<Plans>()) {
  build_modes();
  build_grid();
  build_ladders();
  build_projector();
}

Basis::~Basis() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

int Basis::index_of(int k, int m1, int m2) const {
  const int K = spec_.band_limit;
  if (k < 0 || k > K || std::abs(m1) > K || std::abs(m2) > K) return -1;
  const int w = 2 * K + 1;
  return lookup_[(k * w + (m1 + K)) * w + (m2 + K)];
}

void Basis::build_modes() {
  const int K = spec_.band_limit;
  const int w = 2 * K + 1;
  lookup_.assign(static_cast<size_t>((K + 1) * w * w), -1);
  degree_offset_.assign(K + 2, 0);
  for (int k = 0; k <= K; ++k) {
    degree_offset_[k] = static_cast<int>(modes_.size());
    for (int m1 = -k; m1 <= k; ++m1) {
      for (int m2 = -k; m2 <= k; ++m2) {
        const int rest = k - std::abs(m1) - std::abs(m2);
        if (rest < 0 || rest % 2 != 0) continue;
        lookup_[(k * w + (m1 + K)) * w + (m2 + K)] = static_cast<int>(modes_.size());
        modes_.push_back({k, m1, m2, rest / 2});
      }
    }
  }
  degree_offset_[K + 1] = static_cast<int>(modes_.size());

  conj_index_.resize(modes_.size());
  for (size_t i = 0; i < modes_.size(); ++i) {
    const Mode& m = modes_[i];
    conj_index_[i] = index_of(m.k, -m.m1, -m.m2);
  }

  // Unit L2 normalization: |Y|^2 integrates to pi^2 * int g^2 du.
  const GaussRule rule = gauss_legendre(K + 2);
  norm_.assign(modes_.size(), 1.0);
  for (size_t i = 0; i < modes_.size(); ++i) {
    double s = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double g = radial(static_cast<int>(i), rule.nodes[q]);
      s += rule.weights[q] * g * g;
    }
    norm_[i] = 1.0 / std::sqrt(kPi * kPi * s);
  }
}

double Basis::radial(int idx, double u) const {
  const Mode& m = modes_[idx];
  const int a = std::abs(m.m1), b = std::abs(m.m2);
  const double c = std::sqrt(std::max(0.0, 0.5 * (1.0 + u)));
  const double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - u)));
  const double n = norm_.empty() ? 1.0 : norm_[idx];
  return n * ipow(c, a) * ipow(s, b) * jacobi(m.n, b, a, u);
}

void Basis::build_grid() {
  const GridShape g = spec_.grid_shape;
  const GaussRule rule = gauss_legendre(g.n_u);
  u_nodes_ = rule.nodes;
  u_weights_ = rule.weights;

  radial_table_.resize(num_modes(), g.n_u);
  for (int i = 0; i < num_modes(); ++i) {
    for (int j = 0; j < g.n_u; ++j) radial_table_(i, j) = radial(i, u_nodes_[j]);
  }

  const double dxi = 2.0 * kPi / g.n_xi;
  grid_weight_.resize(g.size());
  for (int j = 0; j < g.n_u; ++j) {
    const double w = 0.25 * u_weights_[j] * dxi * dxi;
    for (int ab = 0; ab < g.n_xi * g.n_xi; ++ab) grid_weight_[j * g.n_xi * g.n_xi + ab] = w;
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * g.size()));
  const int n[2] = {g.n_xi, g.n_xi};
  const int dist = g.n_xi * g.n_xi;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_many_dft(2, n, g.n_u, buf, nullptr, 1, dist, buf, nullptr, 1, dist,
                                       FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_many_dft(2, n, g.n_u, buf, nullptr, 1, dist, buf, nullptr, 1, dist,
                                        FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (!plans_->forward || !plans_->backward) throw std::runtime_error("FFTW planning failed");
}

CVector Basis::synthesize(const CVector& coeffs) const {
  if (coeffs.size() != num_modes()) throw ConfigError("synthesize: coefficient size mismatch");
  const GridShape g = spec_.grid_shape;
  const int n = g.n_xi;
  CVector out = CVector::Zero(g.size());
  for (int i = 0; i < num_modes(); ++i) {
    const Complex c = coeffs[i];
    if (c == Complex(0.0, 0.0)) continue;
    const Mode& m = modes_[i];
    const int a = ((m.m1 % n) + n) % n;
    const int b = ((m.m2 % n) + n) % n;
    for (int j = 0; j < g.n_u; ++j) out[(j * n + a) * n + b] += c * radial_table_(i, j);
  }
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_->backward, p, p);
  return out;
}

CVector Basis::analyze(const CVector& values) const {
  if (values.size() != grid_size()) throw ConfigError("analyze: grid size mismatch");
  const GridShape g = spec_.grid_shape;
  const int n = g.n_xi;
  CVector f = values;
  auto* p = reinterpret_cast<fftw_complex*>(f.data());
  fftw_execute_dft(plans_->forward, p, p);
  const double dxi = 2.0 * kPi / n;
  CVector c(num_modes());
  for (int i = 0; i < num_modes(); ++i) {
    const Mode& m = modes_[i];
    const int a = ((m.m1 % n) + n) % n;
    const int b = ((m.m2 % n) + n) % n;
    Complex s{0.0, 0.0};
    for (int j = 0; j < g.n_u; ++j) s += (0.25 * u_weights_[j] * radial_table_(i, j)) * f[(j * n + a) * n + b];
    c[i] = s * (dxi * dxi);
  }
  return c;
}

Complex Basis::integrate(const CVector& values) const {
  if (values.size() != grid_size()) throw ConfigError("integrate: grid size mismatch");
  Complex s{0.0, 0.0};
  for (int g = 0; g < grid_size(); ++g) s += grid_weight_[g] * values[g];
  return s;
}

S3Point Basis::grid_point(int gidx) const {
  const GridShape g = spec_.grid_shape;
  const int n = g.n_xi;
  const int j = gidx / (n * n);
  const int a = (gidx / n) % n;
  const int b = gidx % n;
  const double eta = 0.5 * std::acos(u_nodes_[j]);
  return S3Point::from_hopf(eta, 2.0 * kPi * a / n, 2.0 * kPi * b / n);
}

CVector Basis::harmonics_at(const S3Point& p) const {
  const double u = std::norm(p.z1) - std::norm(p.z2);
  CVector y(num_modes());
  for (int i = 0; i < num_modes(); ++i) {
    const Mode& m = modes_[i];
    y[i] = norm_[i] * jacobi(m.n, std::abs(m.m2), std::abs(m.m1), u) * zpow(p.z1, m.m1) * zpow(p.z2, m.m2);
  }
  return y;
}

Complex Basis::evaluate(const CVector& coeffs, const S3Point& p) const {
  if (coeffs.size() != num_modes()) throw ConfigError("evaluate: coefficient size mismatch");
  return (harmonics_at(p).array() * coeffs.array()).sum();
}

void Basis::build_ladders() {
  // L+ = X2 - i X3 maps (m1, m2) -> (m1+1, m2-1) with radial action
  // g' + (m1 tan eta + m2 cot eta) g; L- = X2 + i X3 is the reverse shift.
  // Coefficients are obtained by projecting onto the target harmonic.
  const int K = spec_.band_limit;
  const GaussRule rule = gauss_legendre(K + 4);
  const int nm = num_modes();
  lp_target_.assign(nm, -1);
  lm_target_.assign(nm, -1);
  lp_coef_.assign(nm, 0.0);
  lm_coef_.assign(nm, 0.0);

  for (int i = 0; i < nm; ++i) {
    const Mode& m = modes_[i];
    const int a = std::abs(m.m1), b = std::abs(m.m2);
    for (int dir : {+1, -1}) {
      const int t = index_of(m.k, m.m1 + dir, m.m2 - dir);
      const double ca = dir * m.m1 - a;  // coefficient of C^{a-1} S^{b+1} P
      const double cb = b + dir * m.m2;  // coefficient of C^{a+1} S^{b-1} P
      double proj = 0.0, hh = 0.0;
      for (size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = rule.nodes[q];
        const double c = std::sqrt(0.5 * (1.0 + u));
        const double s = std::sqrt(0.5 * (1.0 - u));
        const double P = jacobi(m.n, b, a, u);
        const double dP = jacobi_derivative(m.n, b, a, u);
        double h = -4.0 * ipow(c, a + 1) * ipow(s, b + 1) * dP;
        if (ca != 0.0) h += ca * ipow(c, a - 1) * ipow(s, b + 1) * P;
        if (cb != 0.0) h += cb * ipow(c, a + 1) * ipow(s, b - 1) * P;
        h *= norm_[i];
        hh += rule.weights[q] * h * h;
        if (t >= 0) proj += rule.weights[q] * h * radial(t, u);
      }
      proj *= kPi * kPi;
      hh *= kPi * kPi;
      if (std::abs(hh - proj * proj) > 1e-9 * (1.0 + hh)) {
        throw std::logic_error("ladder action leaves the target harmonic");
      }
      if (dir > 0) {
        lp_target_[i] = t;
        lp_coef_[i] = proj;
      } else {
        lm_target_[i] = t;
        lm_coef_[i] = proj;
      }
    }
  }
}

void Basis::apply_frame(int axis, const CVector& in, CVector& out) const {
  const int nm = num_modes();
  if (in.size() != nm) throw ConfigError("apply_frame: coefficient size mismatch");
  out = CVector::Zero(nm);
  const Complex I{0.0, 1.0};
  switch (axis) {
    case 0:
      for (int i = 0; i < nm; ++i) out[i] = I * static_cast<double>(modes_[i].m1 - modes_[i].m2) * in[i];
      break;
    case 1:
      for (int i = 0; i < nm; ++i) {
        if (lp_target_[i] >= 0) out[lp_target_[i]] += 0.5 * lp_coef_[i] * in[i];
        if (lm_target_[i] >= 0) out[lm_target_[i]] += 0.5 * lm_coef_[i] * in[i];
      }
      break;
    case 2:
      for (int i = 0; i < nm; ++i) {
        if (lp_target_[i] >= 0) out[lp_target_[i]] += (0.5 * lp_coef_[i]) * I * in[i];
        if (lm_target_[i] >= 0) out[lm_target_[i]] -= (0.5 * lm_coef_[i]) * I * in[i];
      }
      break;
    default:
      throw ConfigError("frame axis must be 1, 2 or 3");
  }
}

void Basis::build_projector() {
  const int K = spec_.band_limit;
  const double c = spec_.frame_normalization;
  const double o = spec_.orientation;
  const Complex I{0.0, 1.0};

  std::vector<Eigen::MatrixXcd> rough(K + 1), curl(K + 1);
  for (int k = 0; k <= K; ++k) {
    const int d = degree_size(k), off = degree_offset(k);
    std::array<Eigen::MatrixXcd, 3> X;
    for (auto& x : X) x = Eigen::MatrixXcd::Zero(d, d);
    for (int l = 0; l < d; ++l) {
      const int i = off + l;
      X[0](l, l) = I * static_cast<double>(modes_[i].m1 - modes_[i].m2);
      if (lp_target_[i] >= 0) {
        X[1](lp_target_[i] - off, l) += 0.5 * lp_coef_[i];
        X[2](lp_target_[i] - off, l) += 0.5 * lp_coef_[i] * I;
      }
      if (lm_target_[i] >= 0) {
        X[1](lm_target_[i] - off, l) += 0.5 * lm_coef_[i];
        X[2](lm_target_[i] - off, l) -= 0.5 * lm_coef_[i] * I;
      }
    }
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(3 * d, 3 * d);
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(3 * d, 3 * d);
    for (int ax = 0; ax < 3; ++ax) {
      // (nabla_ax a)_r = X_ax a_r + (c/2) eps(ax, j, r) a_j
      Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(3 * d, 3 * d);
      for (int r = 0; r < 3; ++r) {
        N.block(r * d, r * d, d, d) += X[ax];
        for (int j = 0; j < 3; ++j) {
          const int e = eps3(ax, j, r);
          if (e != 0) N.block(r * d, j * d, d, d) += (0.5 * c * e) * Id;
        }
      }
      R += N * N;
    }
    for (int r = 0; r < 3; ++r) {
      C.block(r * d, r * d, d, d) -= o * c * Id;
      for (int ax = 0; ax < 3; ++ax) {
        for (int j = 0; j < 3; ++j) {
          const int e = eps3(r, ax, j);
          if (e != 0) C.block(r * d, j * d, d, d) += (o * e) * X[ax];
        }
      }
    }
    rough[k] = std::move(R);
    curl[k] = std::move(C);
  }

  // Calibrate (c0, s0) from two divergence-free fields: sigma^1 and the curl
  // of a fixed pseudo-random field, requiring s0 * <v, cc v> + c0 <v,v> = <v, rough v>.
  auto quotients = [&](int k, const Eigen::VectorXcd& v) {
    const Eigen::MatrixXcd cc = curl[k] * curl[k];
    const double vv = v.squaredNorm();
    return std::pair<double, double>{(v.dot(cc * v)).real() / vv, (v.dot(rough[k] * v)).real() / vv};
  };
  Eigen::VectorXcd sigma = Eigen::VectorXcd::Zero(3);
  sigma[0] = std::sqrt(2.0) * kPi;
  const auto [cc1, lap1] = quotients(0, sigma);

  const int kr = std::min(2, K);
  const int dr = degree_size(kr);
  std::mt19937_64 rng(20240531ULL);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXcd w(3 * dr);
  for (int i = 0; i < 3 * dr; ++i) w[i] = Complex(U(rng), U(rng));
  const Eigen::VectorXcd v = curl[kr] * w;
  const auto [cc2, lap2] = quotients(kr, v);

  const double det = cc1 - cc2;
  if (std::abs(det) < 1e-8) throw std::logic_error("projector calibration is degenerate");
  s0_ = (lap1 - lap2) / det;
  c0_ = lap1 - s0_ * cc1;

  proj_blocks_.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    const int n3 = 3 * degree_size(k);
    const Eigen::MatrixXcd shifted = rough[k] - c0_ * Eigen::MatrixXcd::Identity(n3, n3);
    proj_blocks_[k] = shifted.partialPivLu().solve(s0_ * (curl[k] * curl[k]));
  }
}

void Basis::apply_projector(const std::array<CVector, 3>& in, std::array<CVector, 3>& out) const {
  const int K = spec_.band_limit;
  std::array<CVector, 3> res;
  for (auto& r : res) r.resize(num_modes());
  for (int k = 0; k <= K; ++k) {
    const int d = degree_size(k), off = degree_offset(k);
    Eigen::VectorXcd v(3 * d);
    for (int r = 0; r < 3; ++r) v.segment(r * d, d) = in[r].segment(off, d);
    const Eigen::VectorXcd pv = proj_blocks_[k] * v;
    for (int r = 0; r < 3; ++r) res[r].segment(off, d) = pv.segment(r * d, d);
  }
  out = std::move(res);
}

std::string fft_library_version() { return fftw_version; }

}  // namespace mkg::s3
