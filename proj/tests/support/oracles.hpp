#pragma once

#include <array>
#include <vector>

#include "mkg/evolution/evolution.hpp"
#include "mkg/s3/fields.hpp"

// Independent reference computations used by the unit and acceptance tests.
namespace mkg::test {

using s3::BasisPtr;
using s3::Complex;
using s3::OneForm;
using s3::S3Point;
using s3::ScalarField;
using Vec4 = std::array<double, 4>;

// Ambient coordinate x_a restricted to the sphere, a = 0..3.
ScalarField coordinate_field(const BasisPtr& basis, int a);

// Ambient R^4 vectors of the frame fields, read off from X_i x_a. Evaluation
// at arbitrary points goes through the spectral synthesis of the degree-one
// fields X_i x_a, which are themselves degree-one harmonics.
class AmbientFrame {
 public:
  explicit AmbientFrame(const BasisPtr& basis);
  // V_i at the unit vector p; off the sphere the field is extended with
  // degree one homogeneity so that R^4 finite differences make sense.
  Vec4 at(int i, const Vec4& x) const;

 private:
  std::array<std::array<ScalarField, 4>, 3> comp_;
};

// [V, W](x) = DW(x) V(x) - DV(x) W(x) by central differences in R^4.
Vec4 lie_bracket_fd(const AmbientFrame& f, int i, int j, const Vec4& x, double h);

double dot(const Vec4& a, const Vec4& b);

// Largest |f| over the collocation grid.
double sup_norm(const ScalarField& f);

// Angular frequency from the upward/downward zero crossings of a sampled
// oscillation (linear interpolation between samples).
double crossing_frequency(const std::vector<double>& t, const std::vector<double>& y);

// A0_dot by central differences: one RK4 step of +h and -h, each re-solving
// A0 from the stepped slice.
ScalarField a0_dot_central_difference(const state::FieldState& s, double h, const evolution::StepOptions& opts = {});

// Ordinary least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mkg::test
