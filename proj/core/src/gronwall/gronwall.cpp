#include "mkg/gronwall/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "mkg/errors.hpp"

namespace mkg::gronwall {

PolySpec::PolySpec(std::vector<double> c) : coeffs(std::move(c)) {
  for (double v : coeffs) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("polynomial coefficients must be finite and nonnegative");
  }
}

int PolySpec::degree() const {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    if (coeffs[k] != 0.0) return k;
  }
  return 0;
}

double PolySpec::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double PolySpec::max_coeff() const { return coeffs.empty() ? 0.0 : *std::max_element(coeffs.begin(), coeffs.end()); }

namespace {

double rhs(const PolySpec& p, double g) { return g * p(std::sqrt(std::max(g, 0.0))); }

double rk4(const PolySpec& p, double g, double h) {
  const double k1 = rhs(p, g);
  const double k2 = rhs(p, g + 0.5 * h * k1);
  const double k3 = rhs(p, g + 0.5 * h * k2);
  const double k4 = rhs(p, g + h * k3);
  return g + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double max_ratio(const ExtremalSolution& s, double f0) {
  if (s.blew_up) return std::numeric_limits<double>::infinity();
  return *std::max_element(s.g.begin(), s.g.end()) / f0;
}

}  // namespace

ExtremalSolution extremal_solve(const PolySpec& p, double f0, double tau_max, double dt, double blow_up_cap) {
  if (!(f0 >= 0.0)) throw ConfigError("f0 must be nonnegative");
  if (!(dt > 0.0) || !(tau_max >= 0.0)) throw ConfigError("extremal_solve needs dt > 0 and tau_max >= 0");
  ExtremalSolution s;
  s.tau.push_back(0.0);
  s.g.push_back(f0);
  const long n = static_cast<long>(std::ceil(tau_max / dt - 1e-9));
  double g = f0;
  for (long i = 1; i <= n; ++i) {
    const double t0 = (i - 1) * dt;
    const double t1 = i == n ? tau_max : i * dt;
    g = rk4(p, g, t1 - t0);
    if (!std::isfinite(g) || g > blow_up_cap) {
      s.blew_up = true;
      s.blow_up_time = t1;
      return s;
    }
    s.tau.push_back(t1);
    s.g.push_back(g);
  }
  return s;
}

LemmaTable verify_lemma(const PolySpec& p, const std::vector<double>& f0_grid, double tau_max, double dt) {
  LemmaTable t;
  const int d = p.degree();
  const double big_d = (d + 1) * p.max_coeff();
  std::vector<double> proof(d + 1, 0.0);
  proof[0] = big_d;
  proof[d] += big_d;
  const PolySpec p_proof(proof);
  t.c_small = std::exp(p(0.0) * tau_max);

  for (double f0 : f0_grid) {
    if (!(f0 >= 0.0)) throw ConfigError("f0 grid must be nonnegative");
    LemmaRow row;
    row.f0 = f0;
    if (f0 > 0.0) {
      const auto sharp = extremal_solve(p, f0, tau_max, dt);
      row.c = max_ratio(sharp, f0);
      row.blew_up = sharp.blew_up;
      row.blow_up_time = sharp.blow_up_time;
      row.c_proof = max_ratio(extremal_solve(p_proof, f0, tau_max, dt), f0);
    }
    t.rows.push_back(row);
  }

  // Walk toward f0 -> 0.
  std::vector<LemmaRow> sorted = t.rows;
  std::sort(sorted.begin(), sorted.end(), [](const LemmaRow& a, const LemmaRow& b) { return a.f0 > b.f0; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].c > sorted[i - 1].c * (1.0 + 1e-12)) t.monotone = false;
  }
  if (!sorted.empty()) t.bounded = sorted.back().c <= t.c_small * 1.01;
  for (const auto& r : sorted) {
    if (r.c <= 2.0 * t.c_small) {
      t.threshold_f0 = r.f0;
      break;
    }
  }
  return t;
}

void write_lemma_csv(const std::string& path, const LemmaTable& table) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os.precision(17);
  os << "f0,C,C_proof,blow_up_time\n";
  for (const auto& r : table.rows) {
    os << r.f0 << ',' << r.c << ',' << r.c_proof << ',';
    if (r.blew_up) os << r.blow_up_time;
    os << '\n';
  }
}

PStarFit fit_pstar(const std::vector<double>& tau, const std::vector<double>& s2, double margin) {
  if (tau.size() != s2.size() || tau.size() < 2) throw ConfigError("fit_pstar needs matching samples, at least two");
  PStarFit fit;
  for (std::size_t i = 1; i < tau.size(); ++i) {
    const double h = std::abs(tau[i] - tau[i - 1]);
    const double lo = std::min(s2[i], s2[i - 1]);
    if (h == 0.0) continue;
    if (!(lo > 0.0)) {
      if (s2[i] != s2[i - 1]) throw DomainError("P* fit needs a positive curve");
      continue;
    }
    fit.d = std::max(fit.d, std::abs(s2[i] - s2[i - 1]) / h / (lo * (1.0 + lo)));
  }
  fit.d *= margin;
  return fit;
}

Domination check_domination(const PolySpec& p, const std::vector<double>& tau, const std::vector<double>& s2,
                            double dt) {
  if (tau.size() != s2.size() || tau.empty()) throw ConfigError("check_domination needs matching samples");
  Domination out;
  out.min_margin = std::numeric_limits<double>::infinity();
  double g = s2.front();
  double at = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double target = std::abs(tau[i] - tau.front());
    const double len = target - at;
    if (len < 0.0) throw ConfigError("samples must move monotonically away from the first one");
    const long n = std::max(1L, static_cast<long>(std::ceil(len / dt - 1e-9)));
    if (len > 0.0) {
      for (long k = 0; k < n; ++k) g = rk4(p, g, len / n);
    }
    at = target;
    if (s2[i] > 0.0) out.min_margin = std::min(out.min_margin, (g - s2[i]) / s2[i]);
    if (g < s2[i] * (1.0 - 1e-12)) out.holds = false;
  }
  if (!std::isfinite(out.min_margin)) out.min_margin = 0.0;
  return out;
}

}  // namespace mkg::gronwall
