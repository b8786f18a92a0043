#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "symcal/gaussian.hpp"
#include "symcal/matrix.hpp"
#include "symcal/phasespace.hpp"
#include "symcal/symplectic.hpp"

namespace symcal {

using json = nlohmann::json;

/// Formats a double with 17 significant digits (round-trip safe).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- matrix JSON: {"dim": n, "entries": [[row], [row], ...]} ---

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.dim()}, {"entries", std::move(rows)}};
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw std::invalid_argument("matrix JSON: expected {\"dim\", \"entries\"}");
  std::size_t dim = j.at("dim").get<std::size_t>();
  const json& rows = j.at("entries");
  if (!rows.is_array() || rows.size() != dim) throw std::invalid_argument("matrix JSON: bad row count");
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || row.size() != dim) throw std::invalid_argument("matrix JSON: bad column count");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row.at(c).get<double>();
  }
  if (!m.is_finite()) throw std::invalid_argument("matrix JSON: non-finite entry");
  return m;
}

inline json map_class_to_json(const MapClass& c) {
  return json{{"tag", to_string(c.tag)},
              {"residuals", {c.residual_symplectic, c.residual_antisymplectic}}};
}

inline json witness_to_json(const WitnessResult& w) {
  json j{{"classification", map_class_to_json(w.classification)}};
  if (w.witness_G) {
    j["witness_G"] = matrix_to_json(*w.witness_G);
    j["witness_residual"] = *w.witness_residual;
  }
  return j;
}

inline json refutation_to_json(const RefutationReport& r) {
  json j{{"classification", map_class_to_json(r.classification)}, {"conclusion", to_string(r.conclusion)}};
  if (r.witness) {
    j["witness"] = json{{"G_in", matrix_to_json(r.witness->G_in)},
                        {"G_out", matrix_to_json(r.witness->G_out)},
                        {"spectrum", r.witness->spectrum_out}};
  }
  return j;
}

// --- wavefunction CSV: header "x,re,im", one row per sample ---

inline void write_wavefunction_csv(std::ostream& os, const WaveFunction& psi) {
  os << "x,re,im\n";
  for (std::size_t k = 0; k < psi.grid.size; ++k)
    os << format_double(psi.grid.x(k)) << ',' << format_double(psi.samples[k].real()) << ','
       << format_double(psi.samples[k].imag()) << '\n';
}

inline WaveFunction read_wavefunction_csv(std::istream& is, double hbar) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("wavefunction CSV: empty file");
  std::vector<double> xs;
  std::vector<cplx> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fx, fre, fim;
    if (!std::getline(ls, fx, ',') || !std::getline(ls, fre, ',') || !std::getline(ls, fim, ','))
      throw std::invalid_argument("wavefunction CSV: malformed row '" + line + "'");
    xs.push_back(std::stod(fx));
    vals.emplace_back(std::stod(fre), std::stod(fim));
  }
  std::size_t n = xs.size();
  if (n < 2 || !is_power_of_two(n))
    throw std::invalid_argument("wavefunction CSV: sample count must be a power of two");
  double dx = xs[1] - xs[0];
  Grid g{n, dx * static_cast<double>(n), hbar};
  g.validate();
  return WaveFunction{g, std::move(vals), false};
}

// --- phase-space CSV: "x,p,re,im", row-major in (x-index, p-index) ---

inline void write_phasespace_csv(std::ostream& os, const PhaseSpaceFunction& f) {
  os << "x,p,re,im\n";
  for (std::size_t k = 0; k < f.grid.size; ++k)
    for (std::size_t j = 0; j < f.grid.size; ++j)
      os << format_double(f.grid.x(k)) << ',' << format_double(f.p(j)) << ','
         << format_double(f.at(k, j).real()) << ',' << format_double(f.at(k, j).imag()) << '\n';
}

inline PhaseSpaceFunction read_phasespace_csv(std::istream& is, double hbar) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("phase-space CSV: empty file");
  std::vector<double> xs, ps;
  std::vector<cplx> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fx, fp, fre, fim;
    if (!std::getline(ls, fx, ',') || !std::getline(ls, fp, ',') || !std::getline(ls, fre, ',') ||
        !std::getline(ls, fim, ','))
      throw std::invalid_argument("phase-space CSV: malformed row '" + line + "'");
    xs.push_back(std::stod(fx));
    ps.push_back(std::stod(fp));
    vals.emplace_back(std::stod(fre), std::stod(fim));
  }
  std::size_t total = vals.size();
  std::size_t n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(total))));
  if (n * n != total || n < 2 || !is_power_of_two(n))
    throw std::invalid_argument("phase-space CSV: expected N*N rows with N a power of two");
  double dx = xs[n] - xs[0];  // row-major: x advances every n rows
  double dp = ps[1] - ps[0];
  Grid g{n, dx * static_cast<double>(n), hbar};
  g.validate();
  return PhaseSpaceFunction{g, dp, std::move(vals)};
}

inline json residual_report(double residual, double tol) {
  return json{{"residual", residual}, {"tolerance", tol}, {"pass", residual <= tol}};
}

}  // namespace symcal
