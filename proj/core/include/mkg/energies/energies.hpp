#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkg/state/field_state.hpp"

namespace mkg::energies {

using state::FieldState;

struct SobolevSplit {
  double phi = 0.0;    // ||phi_dot||_{H^{m-1}}^2 + ||phi||_{H^m}^2
  double a_vec = 0.0;  // same for A
  double a0 = 0.0;     // ||A0||_{H^m}^2
  double total = 0.0;
};

struct CommutedEnergy {
  double scalar = 0.0;
  double maxwell = 0.0;
  double total = 0.0;
};

struct EnergyReport {
  double tau = 0.0;
  double e_phi = 0.0;
  double e_a = 0.0;
  double e_total = 0.0;
  std::array<double, 2> e_commuted{};  // orders 1 and 2
  std::array<SobolevSplit, 3> sobolev{};  // m = 1, 2, 3
  state::ConstraintReport constraints;
  bool has_commuted = false;
};

// 1/2 ||D0 phi||^2 + 1/2 ||Dslash phi||^2 + 1/2 ||phi||^2 with D = d + iA.
double energy_phi(const FieldState& s);
// 1/2 ||A_dot||^2 + 1/2 ||grad A0||^2 + 1/2 ||nabla A||^2 + ||A||^2 (Coulomb form).
double energy_A(const FieldState& s);

// Sum of the geometric energies of the frame-differentiated fields over all
// multi-indices of length m in {1, 2}.
CommutedEnergy commuted_energy(const FieldState& s, int m);

SobolevSplit sobolev_energy(const FieldState& s, int m);

EnergyReport energy_report(const FieldState& s, bool with_commuted = true);

// Maxwell energy of a (not necessarily Coulomb) potential (alpha0, alpha):
// 1/2 ||grad alpha0 - alpha_dot||^2 + 1/2 ||curl alpha||^2, written in the
// integrated-by-parts frame form.
double maxwell_energy(const s3::ScalarField& alpha0, const s3::OneForm& alpha, const s3::OneForm& alpha_dot);

struct EquivalenceRow {
  double tau = 0.0;
  std::array<double, 3> s_ratio{};  // S_m(tau) / S_m(0)
  double e_phi_over_s1 = 0.0;       // E_phi / S1[phi]
  double e_a_over_s1 = 0.0;         // E_A / (S1[A] + S1[A0])
  double drift = 0.0;               // |E(tau) - E(0)| / E(0)
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  bool guard_triggered = false;
  std::array<double, 3> s_ratio_min{}, s_ratio_max{};
  double sector_ratio_min = 0.0, sector_ratio_max = 0.0;
  double max_drift = 0.0;
};

EquivalenceReport equivalence_report(const std::vector<EnergyReport>& monitor_log);
nlohmann::json to_json(const EquivalenceReport& r);

void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& monitor_log);
std::string energy_csv_header();
std::string energy_csv_row(const EnergyReport& r);

}  // namespace mkg::energies
