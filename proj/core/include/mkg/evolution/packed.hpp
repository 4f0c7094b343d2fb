#pragma once

#include "mkg/evolution/evolution.hpp"

// Flat coefficient layout [phi | phi_dot | a1 a2 a3 | a1_dot a2_dot a3_dot]
// used by the integrator.
namespace mkg::evolution::detail {

using PackedState = s3::CVector;

PackedState pack(const FieldState& s);
FieldState unpack(const s3::BasisPtr& basis, const PackedState& y, double tau, double hubble);
PackedState rhs_packed(const s3::BasisPtr& basis, const PackedState& y, const RhsOptions& opts,
                       Derivative* full = nullptr);

}  // namespace mkg::evolution::detail
