#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "mkg/s3/fields.hpp"
#include "mkg/s3/snapshot.hpp"

namespace mkg::state {

using s3::BasisPtr;
using s3::OneForm;
using s3::ScalarField;

// (phi, phi_dot, A, A_dot, A0) on the slice {tau = const} of the cylinder.
struct FieldState {
  double tau = 0.0;
  ScalarField phi;
  ScalarField phi_dot;
  OneForm a_vec;
  OneForm a_vec_dot;
  ScalarField a0;
  double hubble = 1.0;

  static FieldState zero(const BasisPtr& basis, double tau = 0.0, double hubble = 1.0);
  const BasisPtr& basis() const { return phi.basis(); }
};

enum class Side { past, future };

struct AsymptoticData {
  Side side = Side::future;
  FieldState state;
};

struct ConstraintReport {
  double div_a = 0.0;
  double div_adot = 0.0;
  double mean_a0 = 0.0;
  double elliptic_res = 0.0;
  double dagger_res = 0.0;
  double max() const;
};

nlohmann::json to_json(const ConstraintReport& r);

ConstraintReport check_state(const FieldState& s);

// E = grad A0 - A_dot.
OneForm electric_field(const FieldState& s);

// Distance in the S_m metric; with phase_mod the constant residual-gauge
// phase of the scalar field is removed first (theta = arg <v, u>).
double sobolev_distance(const FieldState& u, const FieldState& v, int m, bool phase_mod = true);
// S_m norm squared of a state: ||phi_dot||_{H^{m-1}}^2 + ||phi||_{H^m}^2 + same for A + ||A0||_{H^m}^2.
double sobolev_size(const FieldState& s, int m);

s3::Snapshot to_snapshot(const FieldState& s);
FieldState from_snapshot(const s3::Snapshot& snap, const BasisPtr& basis = nullptr);
void save_state(const std::string& path, const FieldState& s);
FieldState load_state(const std::string& path, const BasisPtr& basis = nullptr);

}  // namespace mkg::state
