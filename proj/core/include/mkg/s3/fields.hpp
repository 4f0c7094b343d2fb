#pragma once

#include <array>

#include "mkg/s3/basis.hpp"

namespace mkg::s3 {

// Band-limited complex scalar on S^3. Harmonic coefficients are the stored
// representation; collocation values are synthesized on request.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(BasisPtr basis);
  ScalarField(BasisPtr basis, CVector coeffs);

  static ScalarField from_values(BasisPtr basis, const CVector& values);
  static ScalarField constant(BasisPtr basis, Complex value);

  const BasisPtr& basis() const { return basis_; }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }
  CVector values() const;
  Complex at(const S3Point& p) const;
  Complex mean() const;

  ScalarField conj() const;
  ScalarField real_part() const;
  ScalarField imag_part() const;
  bool empty() const { return !basis_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(Complex s);

 private:
  BasisPtr basis_;
  CVector coeffs_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a);
ScalarField operator*(Complex s, ScalarField a);
ScalarField operator*(double s, ScalarField a);

// 1-form A = sum_i a_i sigma^i in the dual of the left-invariant frame.
struct OneForm {
  std::array<ScalarField, 3> comp;

  OneForm() = default;
  explicit OneForm(BasisPtr basis);
  OneForm(ScalarField a1, ScalarField a2, ScalarField a3);

  const BasisPtr& basis() const { return comp[0].basis(); }
  ScalarField& operator[](int i) { return comp[i]; }
  const ScalarField& operator[](int i) const { return comp[i]; }
  OneForm real_part() const;

  OneForm& operator+=(const OneForm& o);
  OneForm& operator-=(const OneForm& o);
  OneForm& operator*=(Complex s);
};

OneForm operator+(OneForm a, const OneForm& b);
OneForm operator-(OneForm a, const OneForm& b);
OneForm operator-(OneForm a);
OneForm operator*(Complex s, OneForm a);
OneForm operator*(double s, OneForm a);

// Throws ConfigError when the two fields live on incompatible bases.
void require_same_basis(const BasisPtr& a, const BasisPtr& b);

// The left-invariant coframe element sigma^{axis}, axis in {1,2,3}.
OneForm coframe(const BasisPtr& basis, int axis);

}  // namespace mkg::s3
