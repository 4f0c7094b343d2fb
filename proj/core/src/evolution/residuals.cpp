#include <cmath>

#include "mkg/evolution/evolution.hpp"
#include "mkg/s3/operators.hpp"

namespace mkg::evolution {

using s3::Complex;
using s3::CVector;

std::vector<ResidualSample> field_residuals(const Trajectory& traj) {
  const auto& st = traj.states;
  if (st.size() < 3) throw ConfigError("field_residuals needs at least three stored samples");
  const auto& basis = st.front().basis();
  const Complex I{0.0, 1.0};

  std::vector<ResidualSample> out;
  for (std::size_t j = 1; j + 1 < st.size(); ++j) {
    const double h = st[j + 1].tau - st[j].tau;
    const double hm = st[j].tau - st[j - 1].tau;
    if (std::abs(h - hm) > 1e-9 * std::abs(h)) continue;  // landing step breaks the stencil
    const FieldState& s = st[j];
    const double inv_h2 = 1.0 / (h * h);

    const ScalarField phi_dd = inv_h2 * (st[j + 1].phi - 2.0 * s.phi + st[j - 1].phi);
    OneForm a_dd(basis);
    for (int i = 0; i < 3; ++i) a_dd[i] = inv_h2 * (st[j + 1].a_vec[i] - 2.0 * s.a_vec[i] + st[j - 1].a_vec[i]);
    const ScalarField a0_dot = (0.5 / h) * (st[j + 1].a0 - st[j - 1].a0);

    const CVector phi = s.phi.values();
    const CVector phi_dot = s.phi_dot.values();
    const Eigen::ArrayXd a0v = s.a0.values().real().array();
    const Eigen::ArrayXd a0dv = a0_dot.values().real().array();
    Eigen::ArrayXd asq = Eigen::ArrayXd::Zero(basis->grid_size());
    Eigen::ArrayXcd nl = -2.0 * I * a0v.cast<Complex>() * phi_dot.array();
    OneForm current(basis);
    for (int i = 0; i < 3; ++i) {
      const Eigen::ArrayXd ai = s.a_vec[i].values().real().array();
      const Eigen::ArrayXcd dphi = s3::frame_derivative(s.phi, i + 1).values().array();
      asq += ai.square();
      nl += 2.0 * I * ai.cast<Complex>() * dphi;
      const Eigen::ArrayXd ji = phi.array().abs2() * ai + (phi.conjugate().array() * dphi).imag();
      current[i] = ScalarField::from_values(basis, ji.cast<Complex>().matrix());
    }
    nl -= ((asq - a0v.square()).cast<Complex>() + I * a0dv.cast<Complex>()) * phi.array();

    const ScalarField scalar =
        phi_dd - s3::laplacian_scalar(s.phi) + s.phi - ScalarField::from_values(basis, nl.matrix());
    const OneForm maxwell = a_dd - s3::grad(a0_dot) + s3::curl(s3::curl(s.a_vec)) + current;

    out.push_back({s.tau, s3::l2_norm(scalar), s3::l2_norm(maxwell)});
  }
  return out;
}

}  // namespace mkg::evolution
