#include "mkg/s3/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mkg/errors.hpp"

namespace mkg::s3 {

namespace {

constexpr char kMagic[8] = {'M', 'K', 'G', 'S', 'N', 'A', 'P', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("snapshot: truncated file");
  return v;
}

}  // namespace

const CVector& Snapshot::array(const std::string& name) const {
  for (const auto& [n, a] : arrays) {
    if (n == name) return a;
  }
  throw ConfigError("snapshot: missing array '" + name + "'");
}

nlohmann::json basis_header(const Basis& basis) {
  return basis_header(basis.spec(), basis.projector_shift(), basis.projector_scale());
}

int num_modes_for(int K) { return (K + 1) * (K + 2) * (2 * K + 3) / 6; }

nlohmann::json basis_header(const BasisSpec& s, double c0, double s0) {
  return {{"band_limit", s.band_limit},
          {"dealias_degree", s.dealias_degree},
          {"grid_shape", {s.grid_shape.n_u, s.grid_shape.n_xi}},
          {"orientation", s.orientation},
          {"frame_normalization", s.frame_normalization},
          {"num_modes", num_modes_for(s.band_limit)},
          {"mode_order", "k ascending, then m1 ascending, then m2 ascending"},
          {"projector", {{"c0", c0}, {"s0", s0}}}};
}

BasisSpec basis_spec_from_header(const nlohmann::json& h) {
  BasisSpec s;
  s.band_limit = h.at("band_limit").get<int>();
  s.dealias_degree = h.at("dealias_degree").get<int>();
  s.grid_shape.n_u = h.at("grid_shape").at(0).get<int>();
  s.grid_shape.n_xi = h.at("grid_shape").at(1).get<int>();
  s.orientation = h.at("orientation").get<int>();
  s.frame_normalization = h.at("frame_normalization").get<double>();
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  const BasisSpec spec = snap.basis.resolved();
  const int nm = num_modes_for(spec.band_limit);
  nlohmann::json header;
  header["basis"] = basis_header(spec, snap.c0, snap.s0);
  header["attributes"] = snap.attributes;
  header["arrays"] = nlohmann::json::array();
  for (const auto& [name, a] : snap.arrays) {
    if (a.size() != nm) throw ConfigError("snapshot: array '" + name + "' has wrong length");
    header["arrays"].push_back({{"name", name}, {"length", a.size()}, {"dtype", "complex128"}});
  }
  const std::string text = header.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("snapshot: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kFormatVersion);
  put<std::uint64_t>(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, a] : snap.arrays) {
    for (int i = 0; i < a.size(); ++i) {
      put<double>(os, a[i].real());
      put<double>(os, a[i].imag());
    }
  }
  if (!os) throw ConfigError("snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("snapshot: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw ConfigError("snapshot: bad magic in '" + path + "'");
  const auto version = get<std::uint32_t>(is);
  if (version != kFormatVersion) throw ConfigError("snapshot: unsupported format version");
  const auto len = get<std::uint64_t>(is);
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw ConfigError("snapshot: truncated header");
  const nlohmann::json header = nlohmann::json::parse(text);

  Snapshot snap;
  snap.basis = basis_spec_from_header(header.at("basis"));
  snap.c0 = header.at("basis").at("projector").at("c0").get<double>();
  snap.s0 = header.at("basis").at("projector").at("s0").get<double>();
  snap.attributes = header.value("attributes", nlohmann::json::object());
  for (const auto& entry : header.at("arrays")) {
    const auto n = entry.at("length").get<std::int64_t>();
    CVector a(n);
    for (std::int64_t i = 0; i < n; ++i) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      a[i] = Complex(re, im);
    }
    snap.arrays.emplace_back(entry.at("name").get<std::string>(), std::move(a));
  }
  return snap;
}

}  // namespace mkg::s3
