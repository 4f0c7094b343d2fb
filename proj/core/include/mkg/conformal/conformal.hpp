#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkg/evolution/evolution.hpp"

namespace mkg::conformal {

using s3::OneForm;
using s3::ScalarField;
using s3::S3Point;
using state::FieldState;

enum class Region { static_patch, horizon, outside };

const char* to_string(Region r);

struct StaticPoint {
  double t = 0.0;
  double r = 0.0;
  double f = 1.0;  // F(r) = 1 - H^2 r^2
  Region region = Region::static_patch;
};

struct CylinderPoint {
  double tau = 0.0;
  double zeta = 0.0;
  double cos_tau = 1.0;  // exact even where tau is within round-off of pi/2
};

// Global de Sitter time eta and the static chart of the observer sitting at
// the pole zeta = pi, x = (-1, 0, 0, 0).
class CoordinateMap {
 public:
  explicit CoordinateMap(double hubble);

  double hubble() const { return h_; }

  // tan(tau/2) = tanh(H eta/2).
  double tau_from_eta(double eta) const;
  double eta_from_tau(double tau) const;
  // pi/2 - |tau(eta)| = 2 atan(exp(-H|eta|)), free of cancellation.
  double boundary_gap(double eta) const;

  double omega(double tau) const { return h_ * std::cos(tau); }
  double omega_eta(double eta) const { return h_ / std::cosh(h_ * eta); }

  double f(double r) const { return 1.0 - h_ * h_ * r * r; }

  // r = sin(zeta)/(H cos tau), tanh(H t) = sin(tau)/(-cos zeta).
  StaticPoint static_map(double tau, double zeta) const;
  // Inverse on the static patch, for t >= 0 or t < 0.
  CylinderPoint from_static(double t, double r) const;

 private:
  double h_;
};

// Physical fields on the eta-slice through s.
struct PhysicalSlice {
  double eta = 0.0;
  double omega = 0.0;
  ScalarField phi;    // Omega * phi
  ScalarField a_eta;  // Omega * A0
  OneForm a_vec;      // spatial components are unchanged
};

PhysicalSlice to_physical(const FieldState& s);

// Point values along a stored trajectory with cubic Hermite interpolation in
// tau, using the stored tau-derivatives.
class PointSeries {
 public:
  enum class Field { phi, a0 };

  PointSeries(const evolution::Trajectory& traj, Field field);

  s3::Complex value(double tau, const S3Point& p) const;
  double tau_min() const { return tau_min_; }
  double tau_max() const { return tau_max_; }

 private:
  const ScalarField& derivative(std::size_t i) const;

  const evolution::Trajectory& traj_;
  Field field_;
  double tau_min_, tau_max_;
  mutable std::vector<ScalarField> a0_dot_;
};

struct DecayFitOptions {
  double eta_min = 8.0;  // in units of 1/H
  double eta_max = 12.0;
  int samples = 41;
  // |field(scri, p)| below threshold * max_tau |field(tau, p)| makes the rate undefined.
  double threshold = 1e-2;
  PointSeries::Field field = PointSeries::Field::phi;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double boundary_value = 0.0;  // |field| at the boundary slice
  std::vector<double> eta;
  std::vector<double> log_abs;
};

// Least-squares slope of log|Omega field(eta, p)| over the eta window, on the
// side of the boundary the trajectory reaches (future for tau -> pi/2).
DecayFit decay_fit(const evolution::Trajectory& traj, const S3Point& p, const DecayFitOptions& opts = {});

void write_decay_csv(const std::string& path, const std::vector<DecayFit>& fits);

struct ProfileOptions {
  double r1 = 0.0;
  double r2 = 0.5;
  double t_min = 6.0;  // in units of 1/H
  double t_max = 10.0;
  int t_samples = 21;
  int angular_samples = 12;
};

struct ProfileReport {
  double r1 = 0.0, r2 = 0.0;
  double ratio = 0.0;   // |e^{Ht} phi~(r1)| / |e^{Ht} phi~(r2)| at t_max
  double target = 0.0;  // sqrt(F(r2)/F(r1))
  double angular_var_start = 0.0;
  double angular_var = 0.0;  // at t_max
  double angular_decay = 0.0;  // start / end
  double corr_exponent = 0.0;  // fitted exponent of phi~ - c Phi1 in t, expected -2H
};

ProfileReport profile_check(const evolution::Trajectory& traj, const ProfileOptions& opts = {});
nlohmann::json to_json(const ProfileReport& r);

// Phi1 = F(r)^{-1/2} e^{-Ht}.
double phi1(double t, double r, double hubble);

struct EigenmodeGrid {
  int n_t = 200;
  int n_r = 200;
  double t_min = 0.0;
  double t_max = 2.0;  // in units of 1/H
  double r_max = 0.9;  // in units of 1/H
  int order = 12;      // even FD order
};

struct EigenmodeResult {
  double max_residual = 0.0;
  double t_at = 0.0;
  double r_at = 0.0;
};

// max |(F^{-1} d_t^2 - r^{-1} d_r(r F d_r) + 2H^2 - H^2) Phi1| over the grid,
// derivatives by centered finite differences.
EigenmodeResult eigenmode_residual(const EigenmodeGrid& grid, double hubble);

// Weights of the derivatives of order 0..m at z from the nodes x.
std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& x, int m);

}  // namespace mkg::conformal
