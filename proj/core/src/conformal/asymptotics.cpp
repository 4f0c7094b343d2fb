#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "mkg/conformal/conformal.hpp"
#include "mkg/elliptic/a0.hpp"
#include "mkg/errors.hpp"

namespace mkg::conformal {

using s3::Complex;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  f.rms = std::sqrt(ss / n);
  return f;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// Fibonacci lattice on S^2.
std::vector<std::array<double, 3>> sphere_directions(int n) {
  std::vector<std::array<double, 3>> d(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(1.0 - z * z);
    d[i] = {rho * std::cos(golden * i), rho * std::sin(golden * i), z};
  }
  return d;
}

// Point of S^3 at angle zeta from (1,0,0,0) in direction w.
S3Point polar_point(double zeta, const std::array<double, 3>& w) {
  const double s = std::sin(zeta);
  return S3Point::from_r4({std::cos(zeta), s * w[0], s * w[1], s * w[2]});
}

}  // namespace

PointSeries::PointSeries(const evolution::Trajectory& traj, Field field) : traj_(traj), field_(field) {
  if (traj.states.empty()) throw ConfigError("empty trajectory");
  tau_min_ = std::min(traj.states.front().tau, traj.states.back().tau);
  tau_max_ = std::max(traj.states.front().tau, traj.states.back().tau);
  a0_dot_.resize(traj.states.size());
}

const ScalarField& PointSeries::derivative(std::size_t i) const {
  const FieldState& s = traj_.states[i];
  if (field_ == Field::phi) return s.phi_dot;
  if (a0_dot_[i].empty()) a0_dot_[i] = elliptic::solve_a0_dot(s, 1e-12);
  return a0_dot_[i];
}

Complex PointSeries::value(double tau, const S3Point& p) const {
  const auto& st = traj_.states;
  if (tau < tau_min_ - 1e-14 || tau > tau_max_ + 1e-14) {
    throw DomainError("tau = " + std::to_string(tau) + " outside the stored trajectory");
  }
  auto field = [&](std::size_t i) -> const ScalarField& { return field_ == Field::phi ? st[i].phi : st[i].a0; };
  if (st.size() == 1) return field(0).at(p);

  const bool ascending = st.back().tau > st.front().tau;
  std::size_t lo = 0, hi = st.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if ((st[mid].tau <= tau) == ascending) lo = mid;
    else hi = mid;
  }
  const double h = st[hi].tau - st[lo].tau;
  const double x = (tau - st[lo].tau) / h;
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * field(lo).at(p) + (x3 - 2 * x2 + x) * h * derivative(lo).at(p) +
         (-2 * x3 + 3 * x2) * field(hi).at(p) + (x3 - x2) * h * derivative(hi).at(p);
}

DecayFit decay_fit(const evolution::Trajectory& traj, const S3Point& p, const DecayFitOptions& opts) {
  if (opts.samples < 2 || !(opts.eta_max > opts.eta_min) || opts.eta_min < 0.0) {
    throw ConfigError("decay fit needs 0 <= eta_min < eta_max and at least two samples");
  }
  const PointSeries series(traj, opts.field);
  const bool future = series.tau_max() >= kHalfPi - 1e-12;
  if (!future && series.tau_min() > -kHalfPi + 1e-12) throw DomainError("trajectory does not reach a boundary slice");
  const double hubble = traj.states.front().hubble;
  const CoordinateMap map(hubble);

  const auto& boundary = future ? (traj.states.back().tau > traj.states.front().tau ? traj.states.back()
                                                                                      : traj.states.front())
                                : (traj.states.back().tau < traj.states.front().tau ? traj.states.back()
                                                                                      : traj.states.front());
  auto field_at = [&](const FieldState& s) { return std::abs((opts.field == PointSeries::Field::phi ? s.phi : s.a0).at(p)); };
  double peak = 0.0;
  for (const auto& s : traj.states) peak = std::max(peak, field_at(s));
  DecayFit out;
  out.boundary_value = field_at(boundary);
  if (!(peak > 0.0) || out.boundary_value <= opts.threshold * peak) {
    throw RateUndefinedError("field at the boundary is below threshold at this point (" +
                             std::to_string(out.boundary_value) + " vs peak " + std::to_string(peak) + ")");
  }

  for (double e : linspace(opts.eta_min / hubble, opts.eta_max / hubble, opts.samples)) {
    const double gap = map.boundary_gap(e);
    const double tau = future ? kHalfPi - gap : -kHalfPi + gap;
    const double v = map.omega_eta(e) * std::abs(series.value(tau, p));
    if (!(v > 0.0)) throw RateUndefinedError("field vanishes inside the fit window");
    out.eta.push_back(e);
    out.log_abs.push_back(std::log(v));
  }
  const LineFit f = fit_line(out.eta, out.log_abs);
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.rms_residual = f.rms;
  return out;
}

void write_decay_csv(const std::string& path, const std::vector<DecayFit>& fits) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os.precision(17);
  os << "eta,log_abs,point\n";
  for (std::size_t k = 0; k < fits.size(); ++k) {
    for (std::size_t i = 0; i < fits[k].eta.size(); ++i) os << fits[k].eta[i] << ',' << fits[k].log_abs[i] << ',' << k << '\n';
  }
}

ProfileReport profile_check(const evolution::Trajectory& traj, const ProfileOptions& opts) {
  const PointSeries series(traj, PointSeries::Field::phi);
  if (series.tau_max() < kHalfPi - 1e-12) throw DomainError("profile check needs a trajectory reaching tau = pi/2");
  const double hubble = traj.states.front().hubble;
  const CoordinateMap map(hubble);
  if (opts.r1 < 0.0 || opts.r2 < opts.r1 || hubble * opts.r2 >= 1.0) {
    throw DomainError("profile radii must satisfy 0 <= r1 <= r2 < 1/H");
  }
  if (opts.t_samples < 2 || opts.angular_samples < 1 || !(opts.t_max > opts.t_min)) {
    throw ConfigError("profile check needs t_min < t_max, two time samples and one direction");
  }
  const auto dirs = sphere_directions(opts.angular_samples);
  const FieldState& last = traj.states.back().tau > traj.states.front().tau ? traj.states.back() : traj.states.front();
  // The static observer sits at x = (-1, 0, 0, 0): zeta measured from (1,0,0,0) is pi there.
  const Complex pole_value = last.phi.at(S3Point::from_r4({-1.0, 0.0, 0.0, 0.0}));

  struct Slice {
    Complex mean{};
    double var = 0.0;
  };
  auto slice = [&](double t, double r) {
    const CylinderPoint cp = map.from_static(t, r);
    const double scale = std::exp(hubble * t) * hubble * cp.cos_tau;
    std::vector<Complex> v;
    for (const auto& w : dirs) v.push_back(scale * series.value(cp.tau, polar_point(cp.zeta, w)));
    Slice s;
    for (const auto& x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    for (const auto& x : v) s.var = std::max(s.var, std::abs(x - s.mean));
    s.var /= std::abs(s.mean);
    return s;
  };

  ProfileReport rep;
  rep.r1 = opts.r1;
  rep.r2 = opts.r2;
  rep.target = std::sqrt(map.f(opts.r2) / map.f(opts.r1));
  const auto ts = linspace(opts.t_min / hubble, opts.t_max / hubble, opts.t_samples);
  const Complex limit = 2.0 * hubble * pole_value / std::sqrt(map.f(opts.r2));
  std::vector<double> t_fit, log_corr;
  Slice first{}, final_r2{};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Slice s2 = slice(ts[k], opts.r2);
    if (k == 0) first = s2;
    final_r2 = s2;
    const double corr = std::exp(-hubble * ts[k]) * std::abs(s2.mean - limit);
    if (corr > 0.0) {
      t_fit.push_back(ts[k]);
      log_corr.push_back(std::log(corr));
    }
  }
  const Slice final_r1 = slice(ts.back(), opts.r1);
  rep.ratio = std::abs(final_r1.mean) / std::abs(final_r2.mean);
  rep.angular_var_start = first.var;
  rep.angular_var = final_r2.var;
  rep.angular_decay = final_r2.var > 0.0 ? first.var / final_r2.var : std::numeric_limits<double>::infinity();
  if (t_fit.size() >= 2) rep.corr_exponent = fit_line(t_fit, log_corr).slope;
  return rep;
}

nlohmann::json to_json(const ProfileReport& r) {
  return {{"r1", r.r1},
          {"r2", r.r2},
          {"ratio", r.ratio},
          {"target", r.target},
          {"angular_var", r.angular_var},
          {"angular_var_start", r.angular_var_start},
          {"angular_decay", r.angular_decay},
          {"corr_exponent", r.corr_exponent}};
}

}  // namespace mkg::conformal
