#pragma once

#include <string>
#include <vector>

#include "mkg/energies/energies.hpp"
#include "mkg/errors.hpp"
#include "mkg/state/field_state.hpp"

namespace mkg::evolution {

using s3::OneForm;
using s3::ScalarField;
using state::FieldState;

struct RhsOptions {
  double elliptic_tol = 1e-12;
  // ||div A|| / (1 + ||A||_{H1}) above this aborts the evaluation.
  double constraint_limit = 1e-6;
};

struct Derivative {
  ScalarField phi_dot;
  ScalarField phi_ddot;
  OneForm a_dot;
  OneForm a_ddot;
  ScalarField a0;      // mean-zero A0 used in the evaluation
  ScalarField a0_dot;  // A0_dot used in the evaluation
};

// phi_ddot = Delta phi - 2i A0 phi_dot + 2i A.grad phi - (1 - A0^2 + |A|^2 + i A0_dot) phi,
// A_ddot = Delta_rough A - 2A - P(|phi|^2 A) - P(Im(conj(phi) grad phi)), with
// A0 and A0_dot re-solved from the slice data.
Derivative rhs(const FieldState& s, const RhsOptions& opts = {});

struct StepOptions {
  double cfl = 0.5;
  // Largest re-projection correction ||P A - A|| accepted as round-off,
  // relative to ||A|| (plus 1e-13 absolute).
  double projection_gate = 1e-8;
  RhsOptions rhs;
};

double max_step(const s3::Basis& basis, double cfl);

// Classical RK4 on (phi, phi_dot, A, A_dot); A0 of the result is re-solved.
FieldState step_rk4(const FieldState& s, double dt, const StepOptions& opts = {});

struct Trajectory {
  std::vector<FieldState> states;
  double step_size = 0.0;
  std::vector<energies::EnergyReport> monitor_log;
  int steps = 0;
  bool adaptive = false;
  double wallclock = 0.0;
};

struct EvolveOptions {
  StepOptions step;
  bool monitor_commuted = true;
  double blowup_factor = 1e3;
  // When non-empty every stored sample is also written as a snapshot plus a
  // row of monitor.csv in this directory.
  std::string checkpoint_dir;
  int checkpoint_start_index = 0;
};

class BlowUpError : public NumericalAbort {
 public:
  BlowUpError(const std::string& what, Trajectory partial) : NumericalAbort(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

// Evolves to tau_target with uniform steps of size dt and an exact final
// landing step, storing every monitor_every-th state and the final one.
Trajectory evolve(const FieldState& s, double tau_target, double dt, int monitor_every,
                  const EvolveOptions& opts = {});

inline energies::EquivalenceReport equivalence_report(const Trajectory& traj) {
  return energies::equivalence_report(traj.monitor_log);
}

struct ResidualSample {
  double tau = 0.0;
  double scalar = 0.0;   // ||S(phi)||
  double maxwell = 0.0;  // ||M(A) + Im(conj(phi) Dslash phi)||
};

// Second tau-derivatives by central differences over consecutive stored
// samples with equal spacing; first derivatives of A0 likewise.
std::vector<ResidualSample> field_residuals(const Trajectory& traj);

// Checkpoint directory helpers.
std::string checkpoint_snapshot_path(const std::string& dir, int index);
void write_checkpoint_sample(const std::string& dir, int index, const FieldState& s,
                             const energies::EnergyReport& report);
// Latest snapshot index in dir, or -1 if none.
int latest_checkpoint_index(const std::string& dir);
// Loads the latest snapshot in dir and drops its monitor.csv rows from that
// index on, so that evolve() with checkpoint_start_index = *index continues
// the sequence. Throws ConfigError when dir holds no snapshot.
FieldState resume_checkpoint(const std::string& dir, int* index, const s3::BasisPtr& basis = nullptr);

}  // namespace mkg::evolution
