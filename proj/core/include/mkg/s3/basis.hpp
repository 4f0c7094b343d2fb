#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mkg::s3 {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

// Collocation grid: n_u Gauss nodes in u = cos(2 eta) times an n_xi x n_xi
// periodic grid in the Hopf angles (xi1, xi2).
struct GridShape {
  int n_u = 0;
  int n_xi = 0;
  int size() const { return n_u * n_xi * n_xi; }
  friend bool operator==(const GridShape&, const GridShape&) = default;
};

struct BasisSpec {
  int band_limit = 8;
  // Total polynomial degree integrated exactly by the grid; 0 selects 4K,
  // which makes cubic Galerkin products exact.
  int dealias_degree = 0;
  // Zero entries select the smallest grid achieving dealias_degree.
  GridShape grid_shape{};
  int orientation = 1;
  double frame_normalization = 2.0;

  // Fills defaults and validates; throws ConfigError.
  BasisSpec resolved() const;
  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// Harmonic Y_{k,m1,m2} = N e^{i(m1 xi1 + m2 xi2)} cos^|m1|(eta) sin^|m2|(eta)
// P_n^{(|m2|,|m1|)}(cos 2eta), k = |m1| + |m2| + 2n.
struct Mode {
  int k = 0;
  int m1 = 0;
  int m2 = 0;
  int n = 0;
};

// Point of the unit sphere in C^2.
struct S3Point {
  Complex z1{1.0, 0.0};
  Complex z2{0.0, 0.0};

  static S3Point from_hopf(double eta, double xi1, double xi2);
  // x = (cos zeta, sin zeta cos theta, sin zeta sin theta cos phi,
  //      sin zeta sin theta sin phi), z1 = x1 + i x2, z2 = x3 + i x4.
  static S3Point from_hyperspherical(double zeta, double theta, double phi);
  static S3Point from_r4(const std::array<double, 4>& x);
  std::array<double, 4> r4() const;
};

// Version string of the FFT backend.
std::string fft_library_version();

class Basis {
 public:
  static std::shared_ptr<const Basis> create(const BasisSpec& spec);
  ~Basis();
  Basis(const Basis&) = delete;
  Basis& operator=(const Basis&) = delete;

  const BasisSpec& spec() const { return spec_; }
  int band_limit() const { return spec_.band_limit; }
  int dealias_degree() const { return spec_.dealias_degree; }
  GridShape grid_shape() const { return spec_.grid_shape; }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  int grid_size() const { return spec_.grid_shape.size(); }
  int orientation() const { return spec_.orientation; }
  double frame_constant() const { return spec_.frame_normalization; }

  const Mode& mode(int idx) const { return modes_[idx]; }
  // -1 when (k, m1, m2) is not a retained mode.
  int index_of(int k, int m1, int m2) const;
  // Index of conj(Y_idx) = Y_{k,-m1,-m2}.
  int conj_index(int idx) const { return conj_index_[idx]; }
  int degree_offset(int k) const { return degree_offset_[k]; }
  int degree_size(int k) const { return (k + 1) * (k + 1); }
  double laplacian_eigenvalue(int idx) const {
    const int k = modes_[idx].k;
    return -static_cast<double>(k * (k + 2));
  }

  CVector synthesize(const CVector& coeffs) const;
  // L2-orthogonal projection of grid data onto the retained harmonics.
  CVector analyze(const CVector& values) const;
  Complex integrate(const CVector& values) const;
  const Eigen::VectorXd& grid_weights() const { return grid_weight_; }
  S3Point grid_point(int g) const;

  // out = X_{axis+1} in, axis in {0, 1, 2}.
  void apply_frame(int axis, const CVector& in, CVector& out) const;

  Complex evaluate(const CVector& coeffs, const S3Point& p) const;
  // Values of all retained harmonics at p.
  CVector harmonics_at(const S3Point& p) const;

  // Divergence-free projection s0 (Delta_rough - c0)^{-1} curl curl, applied
  // blockwise per degree.
  double projector_shift() const { return c0_; }
  double projector_scale() const { return s0_; }
  void apply_projector(const std::array<CVector, 3>& in, std::array<CVector, 3>& out) const;

 private:
  explicit Basis(const BasisSpec& resolved);
  void build_modes();
  void build_grid();
  void build_ladders();
  void build_projector();
  double radial(int idx, double u) const;

  BasisSpec spec_;
  std::vector<Mode> modes_;
  std::vector<int> conj_index_;
  std::vector<int> degree_offset_;
  std::vector<double> norm_;
  // index lookup table (k, m1 + K, m2 + K)
  std::vector<int> lookup_;

  std::vector<double> u_nodes_;
  std::vector<double> u_weights_;
  Eigen::MatrixXd radial_table_;  // num_modes x n_u
  Eigen::VectorXd grid_weight_;

  std::vector<int> lp_target_, lm_target_;
  std::vector<double> lp_coef_, lm_coef_;

  double c0_ = 0.0;
  double s0_ = 0.0;
  std::vector<Eigen::MatrixXcd> proj_blocks_;

  struct Plans;
  std::unique_ptr<Plans> plans_;
};

using BasisPtr = std::shared_ptr<const Basis>;

}  // namespace mkg::s3
