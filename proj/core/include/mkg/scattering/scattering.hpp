#pragma once

#include <nlohmann/json.hpp>

#include "mkg/evolution/evolution.hpp"

namespace mkg::scattering {

using state::AsymptoticData;
using state::FieldState;
using state::Side;

struct ScatterOptions {
  double dt = 1e-3;
  int monitor_every = 10;
  evolution::EvolveOptions evolve;
};

// Bookkeeping of one evolution between two slices.
struct RunLog {
  double s2_start = 0.0;
  double s2_end = 0.0;
  int steps = 0;
  double wallclock = 0.0;
  evolution::Trajectory trajectory;  // kept for diagnostics
};

// Wave operators: evolution from tau = 0 to the future (past) boundary.
AsymptoticData wave_forward(const FieldState& u0, const ScatterOptions& opts = {}, RunLog* log = nullptr);
AsymptoticData wave_backward(const FieldState& u0, const ScatterOptions& opts = {}, RunLog* log = nullptr);
// Their inverses: evolution from the boundary back to tau = 0.
FieldState inverse_wave(const AsymptoticData& u, const ScatterOptions& opts = {}, RunLog* log = nullptr);

// One evolution -pi/2 -> pi/2, and its reverse.
AsymptoticData scatter(const AsymptoticData& u_minus, const ScatterOptions& opts = {}, RunLog* log = nullptr);
AsymptoticData inverse_scatter(const AsymptoticData& u_plus, const ScatterOptions& opts = {}, RunLog* log = nullptr);

// ||T+^{-1}(T+(u0)) - u0||_{S_m} / ||u0||_{S_m}, phase-modded; 0 for zero data.
double roundtrip_error(const FieldState& u0, int m, const ScatterOptions& opts = {});

struct ScatteringReport {
  double s2_minus = 0.0;
  double s2_plus = 0.0;
  double ratio = 0.0;  // ||u+||_{S2} / ||u-||_{S2}
  double roundtrip_error = 0.0;
  int steps = 0;
  double wallclock = 0.0;
};

// Runs scatter then inverse_scatter on u_minus.
ScatteringReport scattering_report(const AsymptoticData& u_minus, const ScatterOptions& opts = {});

nlohmann::json to_json(const ScatteringReport& r);

}  // namespace mkg::scattering
