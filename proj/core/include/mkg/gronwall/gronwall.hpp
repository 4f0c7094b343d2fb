#pragma once

#include <string>
#include <vector>

namespace mkg::gronwall {

// P(x) = sum_k coeffs[k] x^k with nonnegative coefficients.
struct PolySpec {
  std::vector<double> coeffs;

  explicit PolySpec(std::vector<double> c = {});
  int degree() const;
  double operator()(double x) const;
  double max_coeff() const;
};

struct ExtremalSolution {
  std::vector<double> tau;
  std::vector<double> g;
  bool blew_up = false;
  double blow_up_time = 0.0;
};

// RK4 for g' = g P(sqrt g), g(0) = f0, on [0, tau_max]. Stops when g exceeds
// blow_up_cap or stops being finite.
ExtremalSolution extremal_solve(const PolySpec& p, double f0, double tau_max, double dt, double blow_up_cap = 1e12);

struct LemmaRow {
  double f0 = 0.0;
  double c = 1.0;        // max g / f0 for the sharp ODE
  double c_proof = 1.0;  // same for g' = D g + D g^{d/2+1}, D = (d+1) max_k P_k
  bool blew_up = false;
  double blow_up_time = 0.0;
};

struct LemmaTable {
  std::vector<LemmaRow> rows;  // in the order of the f0 grid
  double c_small = 1.0;        // e^{P(0) tau_max}
  bool monotone = true;        // C non-increasing as f0 decreases
  bool bounded = true;         // C at the smallest f0 within 1% of c_small
  double threshold_f0 = 0.0;   // largest f0 with C <= 2 c_small
};

LemmaTable verify_lemma(const PolySpec& p, const std::vector<double>& f0_grid, double tau_max, double dt = 1e-3);

void write_lemma_csv(const std::string& path, const LemmaTable& table);

// P*(x) = D (1 + x^2) with the smallest D for which every secant slope of the
// sampled curve obeys |S(b) - S(a)| / |b - a| <= min S P*(sqrt(min S)) on the
// interval, times margin.
struct PStarFit {
  double d = 0.0;
  PolySpec poly() const { return PolySpec({d, 0.0, d}); }
};

PStarFit fit_pstar(const std::vector<double>& tau, const std::vector<double>& s2, double margin = 1.05);

struct Domination {
  bool holds = true;
  double min_margin = 0.0;  // min (g - S) / S over the samples
};

// Integrates g' = g P(sqrt g) from S(tau_0) in |tau - tau_0| and compares
// with the samples.
Domination check_domination(const PolySpec& p, const std::vector<double>& tau, const std::vector<double>& s2,
                            double dt = 1e-3);

}  // namespace mkg::gronwall
