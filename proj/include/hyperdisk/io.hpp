#pragma once

// CSV and JSON serialization of profiles, spectral data, sinograms, image
// grids and residual scans. Every CSV starts with a versioned `#` header;
// further `# key value` lines carry metadata.

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigen.hpp"
#include "fourier.hpp"
#include "grid.hpp"
#include "profile.hpp"
#include "radon_euclid.hpp"
#include "radon_hyp.hpp"

namespace hyperdisk::io {

inline constexpr const char* profile_header = "# abel-profile v1";
inline constexpr const char* spectral_header = "# helgason-spectral v1";
inline constexpr const char* euclid_sinogram_header = "# sinogram v1 euclid";
inline constexpr const char* hyp_sinogram_header = "# sinogram v1 hyp";
inline constexpr const char* grid_header = "# image-grid v1";
inline constexpr const char* scan_header = "# eigen-scan v1";

namespace detail {

struct Table {
  std::map<std::string, double> meta;
  std::vector<std::vector<double>> rows;
};

inline Table read_table(std::istream& in, const std::string& header, std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error("expected header '" + header + "', got '" + line + "'");
  Table t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      double v;
      if (ss >> key >> v) t.meta[key] = v;
      continue;
    }
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("bad CSV cell '" + cell + "'");
      }
    }
    if (row.size() != columns)
      throw std::runtime_error("expected " + std::to_string(columns) + " columns, got " + std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline double meta(const Table& t, const std::string& key, double fallback) {
  auto it = t.meta.find(key);
  return it == t.meta.end() ? fallback : it->second;
}

inline std::ostream& precise(std::ostream& out) { return out << std::setprecision(17); }

}  // namespace detail

/// Columns: abscissa, value.
inline void write_profile(std::ostream& out, const RadialProfile& p) {
  detail::precise(out) << profile_header << "\n# cutoff " << p.cutoff() << "\n";
  for (std::size_t i = 0; i < p.size(); ++i) out << p.grid()[i] << ',' << p.values()[i] << '\n';
}

inline RadialProfile read_profile(std::istream& in) {
  auto t = detail::read_table(in, profile_header, 2);
  std::vector<double> g, v;
  for (const auto& r : t.rows) {
    g.push_back(r[0]);
    v.push_back(r[1]);
  }
  if (g.empty()) throw std::runtime_error("empty profile");
  double cutoff = detail::meta(t, "cutoff", g.back());
  return RadialProfile(std::move(g), std::move(v), cutoff);
}

/// Columns: lambda, theta, re, im; lambda-major.
inline void write_spectral(std::ostream& out, const SpectralData& sd) {
  detail::precise(out) << spectral_header << '\n';
  const auto& nodes = sd.boundary().nodes();
  for (std::size_t i = 0; i < sd.lambdas().size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      cplx v = sd(i, j);
      out << sd.lambdas()[i] << ',' << nodes[j].theta() << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

inline SpectralData read_spectral(std::istream& in) {
  auto t = detail::read_table(in, spectral_header, 4);
  if (t.rows.empty()) throw std::runtime_error("empty spectral data");
  std::vector<double> lambdas;
  std::vector<cplx> values;
  for (const auto& r : t.rows) {
    if (lambdas.empty() || r[0] != lambdas.back()) lambdas.push_back(r[0]);
    values.emplace_back(r[2], r[3]);
  }
  if (values.size() % lambdas.size() != 0) throw std::runtime_error("ragged spectral data");
  const int n_boundary = static_cast<int>(values.size() / lambdas.size());
  return SpectralData(std::move(lambdas), n_boundary, std::move(values));
}

/// Columns: theta, p, value; angle-major.
inline void write_sinogram(std::ostream& out, const Sinogram& s) {
  detail::precise(out) << euclid_sinogram_header << '\n';
  if (std::isfinite(s.support_radius())) out << "# support_radius " << s.support_radius() << '\n';
  for (int k = 0; k < s.n_angles(); ++k)
    for (int i = 0; i < s.n_offsets(); ++i) out << s.angle(k) << ',' << s.offset(i) << ',' << s.value(k, i) << '\n';
}

inline Sinogram read_sinogram(std::istream& in) {
  auto t = detail::read_table(in, euclid_sinogram_header, 3);
  if (t.rows.empty()) throw std::runtime_error("empty sinogram");
  int n_offsets = 0;
  while (n_offsets < static_cast<int>(t.rows.size()) && t.rows[n_offsets][0] == t.rows[0][0]) ++n_offsets;
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r[2]);
  const int n_angles = static_cast<int>(v.size()) / n_offsets;
  return Sinogram(n_angles, -t.rows[0][1], n_offsets, std::move(v), detail::meta(t, "support_radius", INFINITY));
}

/// Columns: psi, s, value; psi-major.
inline void write_sinogram(std::ostream& out, const HypSinogram& s) {
  detail::precise(out) << hyp_sinogram_header << '\n';
  if (std::isfinite(s.support_distance())) out << "# support_distance " << s.support_distance() << '\n';
  for (int k = 0; k < s.n_psi(); ++k)
    for (int j = 0; j < s.n_s(); ++j) out << s.psi(k) << ',' << s.s(j) << ',' << s.value(k, j) << '\n';
}

inline HypSinogram read_hyp_sinogram(std::istream& in) {
  auto t = detail::read_table(in, hyp_sinogram_header, 3);
  if (t.rows.empty()) throw std::runtime_error("empty sinogram");
  int n_s = 0;
  while (n_s < static_cast<int>(t.rows.size()) && t.rows[n_s][0] == t.rows[0][0]) ++n_s;
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r[2]);
  const int n_psi = static_cast<int>(v.size()) / n_s;
  return HypSinogram(n_psi, t.rows[n_s - 1][1], n_s, std::move(v),
                     detail::meta(t, "support_distance", INFINITY));
}

inline nlohmann::json grid_sidecar(const ImageGrid& g) {
  return {{"nx", g.nx()},
          {"ny", g.ny()},
          {"x0", g.x0()},
          {"y0", g.y0()},
          {"dx", g.dx()},
          {"dy", g.dy()},
          {"extent", {g.x0(), g.x_max(), g.y0(), g.y_max()}},
          {"layout", "row-major, one row per y"}};
}

/// Row-major values, one CSV row per y.
inline void write_grid_values(std::ostream& out, const GridFunction& f) {
  detail::precise(out) << grid_header << '\n';
  const ImageGrid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out << f.at(i, j) << (i + 1 < g.nx() ? ',' : '\n');
}

/// Writes `path` and the sidecar `path`.json.
inline void write_grid(const std::string& path, const GridFunction& f) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open " + path);
  write_grid_values(csv, f);
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open " + path + ".json");
  side << grid_sidecar(f.grid()).dump(2) << '\n';
}

inline GridFunction read_grid(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open " + path + ".json");
  auto j = nlohmann::json::parse(side);
  ImageGrid g(j.at("nx").get<int>(), j.at("ny").get<int>(), j.at("x0").get<double>(), j.at("y0").get<double>(),
              j.at("dx").get<double>(), j.at("dy").get<double>());
  std::ifstream csv(path);
  if (!csv) throw std::runtime_error("cannot open " + path);
  auto t = detail::read_table(csv, grid_header, static_cast<std::size_t>(g.nx()));
  if (t.rows.size() != static_cast<std::size_t>(g.ny())) throw std::runtime_error("grid row count mismatch");
  std::vector<double> v;
  v.reserve(g.size());
  for (const auto& r : t.rows) v.insert(v.end(), r.begin(), r.end());
  return GridFunction(g, std::move(v));
}

/// Columns: z_re, z_im, residual.
inline void write_scan(std::ostream& out, const std::vector<ScanSample>& scan) {
  detail::precise(out) << scan_header << '\n';
  for (const auto& s : scan) out << s.z.real() << ',' << s.z.imag() << ',' << s.residual << '\n';
}

}  // namespace hyperdisk::io
