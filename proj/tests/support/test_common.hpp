#pragma once

#include <cmath>
#include <map>

#include "mkg/s3/basis.hpp"
#include "mkg/state/field_state.hpp"

namespace mkg::test {

// One basis per band limit for the whole test binary.
inline s3::BasisPtr basis(int k) {
  static std::map<int, s3::BasisPtr> cache;
  auto& b = cache[k];
  if (!b) {
    s3::BasisSpec spec;
    spec.band_limit = k;
    b = s3::Basis::create(spec);
  }
  return b;
}

// phi = eps cos(tau + delta), A = A0 = 0, which solves the full system.
inline state::FieldState homogeneous(const s3::BasisPtr& b, double eps, double delta, double tau) {
  auto s = state::FieldState::zero(b, tau);
  s.phi = s3::ScalarField::constant(b, eps * std::cos(tau + delta));
  s.phi_dot = s3::ScalarField::constant(b, -eps * std::sin(tau + delta));
  return s;
}

}  // namespace mkg::test
