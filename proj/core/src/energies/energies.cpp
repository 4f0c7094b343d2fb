#include "mkg/energies/energies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mkg/errors.hpp"
#include "mkg/s3/operators.hpp"

namespace mkg::energies {

using s3::Complex;
using s3::CVector;
using s3::OneForm;
using s3::ScalarField;

namespace {

// Scalar-sector geometric energy of psi with the covariant derivatives of the
// background potentials; a0 and a are collocation values.
double scalar_energy(const ScalarField& psi, const ScalarField& psi_dot, const Eigen::VectorXd& a0,
                     const std::array<Eigen::VectorXd, 3>& a) {
  const s3::Basis& b = *psi.basis();
  const Complex I{0.0, 1.0};
  const CVector p = psi.values();
  const CVector pd = psi_dot.values();
  Eigen::ArrayXd density = (pd.array() + I * a0.array().cast<Complex>() * p.array()).abs2();
  density += p.array().abs2();
  for (int i = 0; i < 3; ++i) {
    const CVector dp = s3::frame_derivative(psi, i + 1).values();
    density += (dp.array() + I * a[i].array().cast<Complex>() * p.array()).abs2();
  }
  return 0.5 * b.grid_weights().dot(density.matrix());
}

std::vector<std::vector<int>> multi_indices(int m) {
  std::vector<std::vector<int>> out{{}};
  for (int l = 0; l < m; ++l) {
    std::vector<std::vector<int>> next;
    for (const auto& idx : out) {
      for (int ax = 1; ax <= 3; ++ax) {
        auto v = idx;
        v.push_back(ax);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

double covariant_gradient_sq(const OneForm& a) {
  double s = 0.0;
  for (int i = 1; i <= 3; ++i) s += std::pow(s3::l2_norm(s3::covariant_derivative(a, i)), 2);
  return s;
}

double ratio(double num, double den, bool& guard) {
  if (den > 0.0) return num / den;
  guard = true;
  return 0.0;
}

}  // namespace

double energy_phi(const FieldState& s) {
  std::array<Eigen::VectorXd, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = s.a_vec[i].values().real();
  return scalar_energy(s.phi, s.phi_dot, s.a0.values().real(), a);
}

double energy_A(const FieldState& s) {
  const double adot = std::pow(s3::l2_norm(s.a_vec_dot), 2);
  const double ga0 = std::pow(s3::l2_norm(s3::grad(s.a0)), 2);
  const double na = covariant_gradient_sq(s.a_vec);
  const double a = std::pow(s3::l2_norm(s.a_vec), 2);
  return 0.5 * adot + 0.5 * ga0 + 0.5 * na + a;
}

double maxwell_energy(const ScalarField& alpha0, const OneForm& alpha, const OneForm& alpha_dot) {
  const double adot = std::pow(s3::l2_norm(alpha_dot), 2);
  const double ga0 = std::pow(s3::l2_norm(s3::grad(alpha0)), 2);
  const double cross = s3::l2_inner(alpha0, s3::div(alpha_dot)).real();
  const double na = covariant_gradient_sq(alpha);
  const double dv = std::pow(s3::l2_norm(s3::div(alpha)), 2);
  const double a = std::pow(s3::l2_norm(alpha), 2);
  return 0.5 * adot + 0.5 * ga0 + cross + 0.5 * na - 0.5 * dv + a;
}

CommutedEnergy commuted_energy(const FieldState& s, int m) {
  if (m < 1 || m > 2) throw UnsupportedOrderError("commuted energy order must be 1 or 2");
  std::array<Eigen::VectorXd, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = s.a_vec[i].values().real();
  const Eigen::VectorXd a0 = s.a0.values().real();

  CommutedEnergy e;
  for (const auto& idx : multi_indices(m)) {
    ScalarField psi = s.phi, psi_dot = s.phi_dot, alpha0 = s.a0;
    OneForm alpha = s.a_vec, alpha_dot = s.a_vec_dot;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      psi = s3::frame_derivative(psi, *it);
      psi_dot = s3::frame_derivative(psi_dot, *it);
      alpha0 = s3::frame_derivative(alpha0, *it);
      alpha = s3::covariant_derivative(alpha, *it);
      alpha_dot = s3::covariant_derivative(alpha_dot, *it);
    }
    e.scalar += scalar_energy(psi, psi_dot, a0, a);
    e.maxwell += maxwell_energy(alpha0, alpha, alpha_dot);
  }
  e.total = e.scalar + e.maxwell;
  return e;
}

SobolevSplit sobolev_energy(const FieldState& s, int m) {
  if (m < 1 || m > 3) throw UnsupportedOrderError("Sobolev energy order must be 1..3");
  SobolevSplit r;
  r.phi = s3::sobolev_norm_sq(s.phi_dot, m - 1) + s3::sobolev_norm_sq(s.phi, m);
  r.a_vec = s3::sobolev_norm_sq(s.a_vec_dot, m - 1) + s3::sobolev_norm_sq(s.a_vec, m);
  r.a0 = s3::sobolev_norm_sq(s.a0, m);
  r.total = r.phi + r.a_vec + r.a0;
  return r;
}

EnergyReport energy_report(const FieldState& s, bool with_commuted) {
  EnergyReport r;
  r.tau = s.tau;
  r.e_phi = energy_phi(s);
  r.e_a = energy_A(s);
  r.e_total = r.e_phi + r.e_a;
  if (with_commuted) {
    r.e_commuted = {commuted_energy(s, 1).total, commuted_energy(s, 2).total};
    r.has_commuted = true;
  }
  for (int m = 1; m <= 3; ++m) r.sobolev[m - 1] = sobolev_energy(s, m);
  r.constraints = state::check_state(s);
  return r;
}

EquivalenceReport equivalence_report(const std::vector<EnergyReport>& log) {
  EquivalenceReport rep;
  if (log.empty()) return rep;
  const EnergyReport& r0 = log.front();
  const double inf = std::numeric_limits<double>::infinity();
  rep.s_ratio_min.fill(inf);
  rep.s_ratio_max.fill(-inf);
  rep.sector_ratio_min = inf;
  rep.sector_ratio_max = -inf;
  for (const EnergyReport& r : log) {
    EquivalenceRow row;
    row.tau = r.tau;
    bool g = false;
    for (int m = 0; m < 3; ++m) row.s_ratio[m] = ratio(r.sobolev[m].total, r0.sobolev[m].total, g);
    bool gs = false;
    row.e_phi_over_s1 = ratio(r.e_phi, r.sobolev[0].phi, gs);
    const bool phi_sector = !gs;
    gs = false;
    row.e_a_over_s1 = ratio(r.e_a, r.sobolev[0].a_vec + r.sobolev[0].a0, gs);
    const bool a_sector = !gs;
    row.drift = ratio(std::abs(r.e_total - r0.e_total), r0.e_total, g);
    rep.guard_triggered = rep.guard_triggered || g;
    for (int m = 0; m < 3; ++m) {
      rep.s_ratio_min[m] = std::min(rep.s_ratio_min[m], row.s_ratio[m]);
      rep.s_ratio_max[m] = std::max(rep.s_ratio_max[m], row.s_ratio[m]);
    }
    for (auto [ok, v] : {std::pair{phi_sector, row.e_phi_over_s1}, std::pair{a_sector, row.e_a_over_s1}}) {
      if (!ok) continue;
      rep.sector_ratio_min = std::min(rep.sector_ratio_min, v);
      rep.sector_ratio_max = std::max(rep.sector_ratio_max, v);
    }
    rep.max_drift = std::max(rep.max_drift, row.drift);
    rep.rows.push_back(row);
  }
  if (rep.sector_ratio_min == inf) {
    rep.sector_ratio_min = rep.sector_ratio_max = 0.0;
    rep.guard_triggered = true;
  }
  return rep;
}

nlohmann::json to_json(const EquivalenceReport& r) {
  nlohmann::json j;
  j["guard_triggered"] = r.guard_triggered;
  j["max_drift"] = r.max_drift;
  j["sector_ratio"] = {{"min", r.sector_ratio_min}, {"max", r.sector_ratio_max}};
  for (int m = 0; m < 3; ++m) {
    j["S" + std::to_string(m + 1) + "_ratio"] = {{"min", r.s_ratio_min[m]}, {"max", r.s_ratio_max[m]}};
  }
  j["samples"] = r.rows.size();
  return j;
}

std::string energy_csv_header() { return "tau,E_phi,E_A,E_total,E_comm1,E_comm2,S1,S2,S3,div_a,mean_a0"; }

std::string energy_csv_row(const EnergyReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.tau,
                r.e_phi, r.e_a, r.e_total, r.e_commuted[0], r.e_commuted[1], r.sobolev[0].total,
                r.sobolev[1].total, r.sobolev[2].total, r.constraints.div_a, r.constraints.mean_a0);
  return buf;
}

void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& log) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write energy CSV '" + path + "'");
  os << energy_csv_header() << '\n';
  for (const auto& r : log) os << energy_csv_row(r) << '\n';
}

}  // namespace mkg::energies
