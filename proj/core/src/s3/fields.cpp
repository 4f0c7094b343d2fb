#include "mkg/s3/fields.hpp"

#include <cmath>
#include <numbers>

#include "mkg/errors.hpp"

namespace mkg::s3 {

namespace {
const double kSqrtVolume = std::sqrt(2.0) * std::numbers::pi;
}

void require_same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (!a || !b) throw ConfigError("field has no basis");
  if (a == b) return;
  if (!(a->spec() == b->spec())) throw ConfigError("fields live on different bases");
}

ScalarField::ScalarField(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw ConfigError("ScalarField: null basis");
  coeffs_ = CVector::Zero(basis_->num_modes());
}

ScalarField::ScalarField(BasisPtr basis, CVector coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw ConfigError("ScalarField: null basis");
  if (coeffs_.size() != basis_->num_modes()) throw ConfigError("ScalarField: coefficient count mismatch");
}

ScalarField ScalarField::from_values(BasisPtr basis, const CVector& values) {
  CVector c = basis->analyze(values);
  return ScalarField(std::move(basis), std::move(c));
}

ScalarField ScalarField::constant(BasisPtr basis, Complex value) {
  ScalarField f(std::move(basis));
  f.coeffs_[0] = value * kSqrtVolume;
  return f;
}

CVector ScalarField::values() const { return basis_->synthesize(coeffs_); }

Complex ScalarField::at(const S3Point& p) const { return basis_->evaluate(coeffs_, p); }

Complex ScalarField::mean() const { return coeffs_[0] / kSqrtVolume; }

ScalarField ScalarField::conj() const {
  CVector c(coeffs_.size());
  for (int i = 0; i < coeffs_.size(); ++i) c[i] = std::conj(coeffs_[basis_->conj_index(i)]);
  return ScalarField(basis_, std::move(c));
}

ScalarField ScalarField::real_part() const {
  ScalarField r = conj();
  r.coeffs_ = 0.5 * (r.coeffs_ + coeffs_);
  return r;
}

ScalarField ScalarField::imag_part() const {
  ScalarField r = conj();
  r.coeffs_ = (coeffs_ - r.coeffs_) * Complex(0.0, -0.5);
  return r;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_basis(basis_, o.basis_);
  coeffs_ += o.coeffs_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_basis(basis_, o.basis_);
  coeffs_ -= o.coeffs_;
  return *this;
}

ScalarField& ScalarField::operator*=(Complex s) {
  coeffs_ *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator-(ScalarField a) { return a *= Complex(-1.0, 0.0); }
ScalarField operator*(Complex s, ScalarField a) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= Complex(s, 0.0); }

OneForm::OneForm(BasisPtr basis) : comp{ScalarField(basis), ScalarField(basis), ScalarField(basis)} {}

OneForm::OneForm(ScalarField a1, ScalarField a2, ScalarField a3) : comp{std::move(a1), std::move(a2), std::move(a3)} {
  require_same_basis(comp[0].basis(), comp[1].basis());
  require_same_basis(comp[0].basis(), comp[2].basis());
}

OneForm OneForm::real_part() const { return {comp[0].real_part(), comp[1].real_part(), comp[2].real_part()}; }

OneForm& OneForm::operator+=(const OneForm& o) {
  for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
  return *this;
}

OneForm& OneForm::operator-=(const OneForm& o) {
  for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
  return *this;
}

OneForm& OneForm::operator*=(Complex s) {
  for (auto& c : comp) c *= s;
  return *this;
}

OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
OneForm operator-(OneForm a) { return a *= Complex(-1.0, 0.0); }
OneForm operator*(Complex s, OneForm a) { return a *= s; }
OneForm operator*(double s, OneForm a) { return a *= Complex(s, 0.0); }

OneForm coframe(const BasisPtr& basis, int axis) {
  if (axis < 1 || axis > 3) throw ConfigError("coframe axis must be 1, 2 or 3");
  OneForm a(basis);
  a[axis - 1] = ScalarField::constant(basis, 1.0);
  return a;
}

}  // namespace mkg::s3
