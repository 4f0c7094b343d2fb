#include "mkg/state/field_state.hpp"

#include <algorithm>
#include <cmath>

#include "mkg/errors.hpp"
#include "mkg/s3/operators.hpp"

namespace mkg::state {

using s3::CVector;

FieldState FieldState::zero(const BasisPtr& basis, double tau, double hubble) {
  FieldState s;
  s.tau = tau;
  s.hubble = hubble;
  s.phi = ScalarField(basis);
  s.phi_dot = ScalarField(basis);
  s.a_vec = OneForm(basis);
  s.a_vec_dot = OneForm(basis);
  s.a0 = ScalarField(basis);
  return s;
}

double ConstraintReport::max() const { return std::max({div_a, div_adot, mean_a0, elliptic_res, dagger_res}); }

nlohmann::json to_json(const ConstraintReport& r) {
  return {{"div_a", r.div_a},
          {"div_adot", r.div_adot},
          {"mean_a0", r.mean_a0},
          {"elliptic_res", r.elliptic_res},
          {"dagger_res", r.dagger_res}};
}

ConstraintReport check_state(const FieldState& s) {
  const BasisPtr& b = s.basis();
  ConstraintReport r;
  r.div_a = s3::l2_norm(s3::div(s.a_vec));
  r.div_adot = s3::l2_norm(s3::div(s.a_vec_dot));
  r.mean_a0 = std::abs(s.a0.mean());

  const CVector phi = s.phi.values();
  const CVector phi_dot = s.phi_dot.values();
  const CVector a0 = s.a0.values();
  const CVector charge = (phi.conjugate().array() * phi_dot.array()).imag().cast<s3::Complex>().matrix();
  const CVector screened = (phi.cwiseAbs2().array() * a0.array()).matrix();
  const ScalarField q = ScalarField::from_values(b, charge);
  const ScalarField va0 = ScalarField::from_values(b, screened);

  // (-Delta + |phi|^2) a0 + Im(conj(phi) phi_dot)
  r.elliptic_res = s3::l2_norm(va0 - s3::laplacian_scalar(s.a0) + q);
  // div E - a0 |phi|^2 - Im(conj(phi) phi_dot)
  r.dagger_res = s3::l2_norm(s3::div(electric_field(s)) - va0 - q);
  return r;
}

OneForm electric_field(const FieldState& s) { return s3::grad(s.a0) - s.a_vec_dot; }

double sobolev_size(const FieldState& s, int m) {
  if (m < 1 || m > 3) throw UnsupportedOrderError("Sobolev energy order must be 1..3");
  return s3::sobolev_norm_sq(s.phi_dot, m - 1) + s3::sobolev_norm_sq(s.phi, m) +
         s3::sobolev_norm_sq(s.a_vec_dot, m - 1) + s3::sobolev_norm_sq(s.a_vec, m) + s3::sobolev_norm_sq(s.a0, m);
}

double sobolev_distance(const FieldState& u, const FieldState& v, int m, bool phase_mod) {
  s3::Complex rot{1.0, 0.0};
  if (phase_mod) {
    const s3::Complex ov = s3::l2_inner(v.phi, u.phi) + s3::l2_inner(v.phi_dot, u.phi_dot);
    if (std::abs(ov) > 0.0) rot = ov / std::abs(ov);
  }
  FieldState d = u;
  d.phi = u.phi - rot * v.phi;
  d.phi_dot = u.phi_dot - rot * v.phi_dot;
  d.a_vec = u.a_vec - v.a_vec;
  d.a_vec_dot = u.a_vec_dot - v.a_vec_dot;
  d.a0 = u.a0 - v.a0;
  return std::sqrt(sobolev_size(d, m));
}

s3::Snapshot to_snapshot(const FieldState& s) {
  const s3::Basis& b = *s.basis();
  s3::Snapshot snap;
  snap.basis = b.spec();
  snap.c0 = b.projector_shift();
  snap.s0 = b.projector_scale();
  snap.attributes = {{"kind", "field_state"}, {"tau", s.tau}, {"hubble", s.hubble}};
  snap.arrays = {{"phi", s.phi.coeffs()},
                 {"phi_dot", s.phi_dot.coeffs()},
                 {"a1", s.a_vec[0].coeffs()},
                 {"a2", s.a_vec[1].coeffs()},
                 {"a3", s.a_vec[2].coeffs()},
                 {"a1_dot", s.a_vec_dot[0].coeffs()},
                 {"a2_dot", s.a_vec_dot[1].coeffs()},
                 {"a3_dot", s.a_vec_dot[2].coeffs()},
                 {"a0", s.a0.coeffs()}};
  return snap;
}

FieldState from_snapshot(const s3::Snapshot& snap, const BasisPtr& basis) {
  BasisPtr b = basis ? basis : s3::Basis::create(snap.basis);
  if (!(b->spec() == snap.basis.resolved())) throw ConfigError("snapshot basis does not match the requested basis");
  FieldState s;
  s.tau = snap.attributes.at("tau").get<double>();
  s.hubble = snap.attributes.at("hubble").get<double>();
  auto field = [&](const char* name) { return ScalarField(b, snap.array(name)); };
  s.phi = field("phi");
  s.phi_dot = field("phi_dot");
  s.a_vec = OneForm(field("a1"), field("a2"), field("a3"));
  s.a_vec_dot = OneForm(field("a1_dot"), field("a2_dot"), field("a3_dot"));
  s.a0 = field("a0");
  return s;
}

void save_state(const std::string& path, const FieldState& s) { s3::write_snapshot(path, to_snapshot(s)); }

FieldState load_state(const std::string& path, const BasisPtr& basis) {
  return from_snapshot(s3::read_snapshot(path), basis);
}

}  // namespace mkg::state
