#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include "mkg/evolution/evolution.hpp"

namespace mkg::evolution {

namespace fs = std::filesystem;

std::string checkpoint_snapshot_path(const std::string& dir, int index) {
  char name[32];
  std::snprintf(name, sizeof(name), "state_%06d.mkgsnap", index);
  return (fs::path(dir) / name).string();
}

void write_checkpoint_sample(const std::string& dir, int index, const FieldState& s,
                             const energies::EnergyReport& report) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create checkpoint directory '" + dir + "': " + ec.message());
  state::save_state(checkpoint_snapshot_path(dir, index), s);

  const fs::path csv = fs::path(dir) / "monitor.csv";
  const bool fresh = !fs::exists(csv) || index == 0;
  std::ofstream os(csv, fresh ? std::ios::trunc : std::ios::app);
  if (!os) throw ConfigError("cannot write '" + csv.string() + "'");
  if (fresh) os << "index," << energies::energy_csv_header() << '\n';
  os << index << ',' << energies::energy_csv_row(report) << '\n';
}

int latest_checkpoint_index(const std::string& dir) {
  if (!fs::is_directory(dir)) return -1;
  static const std::regex pattern(R"(state_(\d{6})\.mkgsnap)");
  int best = -1;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) best = std::max(best, std::stoi(m[1].str()));
  }
  return best;
}

FieldState resume_checkpoint(const std::string& dir, int* index, const s3::BasisPtr& basis) {
  const int last = latest_checkpoint_index(dir);
  if (last < 0) throw ConfigError("no checkpoint snapshot in '" + dir + "'");
  FieldState s = state::load_state(checkpoint_snapshot_path(dir, last), basis);

  const fs::path csv = fs::path(dir) / "monitor.csv";
  std::vector<std::string> keep;
  if (std::ifstream is(csv); is) {
    std::string line;
    while (std::getline(is, line)) {
      const auto comma = line.find(',');
      const std::string head = line.substr(0, comma);
      if (keep.empty() || std::stoi(head) < last) keep.push_back(line);
    }
  }
  std::ofstream os(csv, std::ios::trunc);
  for (const auto& line : keep) os << line << '\n';
  if (index) *index = last;
  return s;
}

}  // namespace mkg::evolution
