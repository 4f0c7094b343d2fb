#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkg/s3/basis.hpp"

namespace mkg::s3 {

// Self-describing container for harmonic-coefficient arrays; the byte layout
// is documented in docs/snapshot_format.md.
struct Snapshot {
  BasisSpec basis;
  double c0 = 0.0;
  double s0 = 0.0;
  nlohmann::json attributes = nlohmann::json::object();
  std::vector<std::pair<std::string, CVector>> arrays;

  const CVector& array(const std::string& name) const;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

nlohmann::json basis_header(const Basis& basis);
nlohmann::json basis_header(const BasisSpec& spec, double c0, double s0);
int num_modes_for(int band_limit);
BasisSpec basis_spec_from_header(const nlohmann::json& header);

}  // namespace mkg::s3
