#include <cmath>
#include <limits>
#include <numbers>

#include "mkg/conformal/conformal.hpp"
#include "mkg/errors.hpp"

namespace mkg::conformal {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kHorizonTol = 1e-12;
}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::static_patch:
      return "static_patch";
    case Region::horizon:
      return "horizon";
    case Region::outside:
      return "outside";
  }
  return "unknown";
}

CoordinateMap::CoordinateMap(double hubble) : h_(hubble) {
  if (!(hubble > 0.0) || !std::isfinite(hubble)) throw DomainError("Hubble constant must be positive");
}

double CoordinateMap::tau_from_eta(double eta) const { return 2.0 * std::atan(std::tanh(0.5 * h_ * eta)); }

double CoordinateMap::eta_from_tau(double tau) const {
  if (!(std::abs(tau) < kHalfPi)) throw DomainError("eta is undefined on the boundary slices |tau| >= pi/2");
  return 2.0 * std::atanh(std::tan(0.5 * tau)) / h_;
}

double CoordinateMap::boundary_gap(double eta) const { return 2.0 * std::atan(std::exp(-h_ * std::abs(eta))); }

StaticPoint CoordinateMap::static_map(double tau, double zeta) const {
  const double c = std::cos(tau);
  if (!(c > 0.0)) throw DomainError("static chart is undefined on |tau| >= pi/2");
  const double s = std::sin(tau);
  const double cz = -std::cos(zeta);
  StaticPoint p;
  p.r = std::sin(zeta) / (h_ * c);
  p.f = f(p.r);
  if (std::abs(p.f) <= kHorizonTol) {
    p.region = Region::horizon;
    p.t = s == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), s);
  } else if (cz > 0.0 && std::abs(s) < cz) {
    p.region = Region::static_patch;
    p.t = std::atanh(s / cz) / h_;
  } else {
    p.region = Region::outside;
    p.t = std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

CylinderPoint CoordinateMap::from_static(double t, double r) const {
  if (!(r >= 0.0) || !(h_ * r < 1.0)) throw DomainError("static radius must lie in [0, 1/H)");
  const double th = std::tanh(h_ * t);
  const double ft = 1.0 - h_ * h_ * r * r * th * th;
  const double sq = std::sqrt(ft);
  CylinderPoint p;
  p.cos_tau = 1.0 / (std::cosh(h_ * t) * sq);
  const double sin_tau = th * std::sqrt(f(r)) / sq;
  p.tau = std::atan2(sin_tau, p.cos_tau);
  const double sz = h_ * r * p.cos_tau;
  p.zeta = std::atan2(sz, -std::sqrt((1.0 - sz) * (1.0 + sz)));
  return p;
}

PhysicalSlice to_physical(const FieldState& s) {
  const CoordinateMap map(s.hubble);
  if (!(std::abs(s.tau) < kHalfPi)) {
    throw DomainError("physical fields are degenerate on the boundary slice tau = " + std::to_string(s.tau));
  }
  PhysicalSlice p;
  p.eta = map.eta_from_tau(s.tau);
  p.omega = map.omega(s.tau);
  p.phi = p.omega * s.phi;
  p.a_eta = p.omega * s.a0;
  p.a_vec = s.a_vec;
  return p;
}

}  // namespace mkg::conformal
