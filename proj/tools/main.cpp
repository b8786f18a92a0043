// Batch front-end: every library operation behind a subcommand with JSON/CSV
// I/O. Exit 0 = success, 2 = a residual check ran and failed, 1 = input error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symcal/gaussian.hpp"
#include "symcal/io.hpp"
#include "symcal/phasespace.hpp"
#include "symcal/symplectic.hpp"

namespace {

using symcal::json;
using symcal::Matrix;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitCheckFailed = 2;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

Matrix load_matrix(const std::string& path) { return symcal::matrix_from_json(load_json(path)); }

symcal::WaveFunction load_state(const std::string& path, double hbar) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return symcal::read_wavefunction_csv(in, hbar);
}

symcal::PhaseSpaceFunction load_symbol(const std::string& path, double hbar) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return symcal::read_phasespace_csv(in, hbar);
}

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output '" + path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
  void write(const json& j) const { write(j.dump(2)); }
};

// JSON-valued subcommands print at nlohmann's shortest round-trip precision
// (up to 17 significant digits); CSV writers use %.17g directly.

int run(int argc, char** argv) {
  CLI::App app{"symplectic phase-space calculator"};
  app.require_subcommand(1);

  double hbar = 1.0;
  double tol = 1e-8;
  std::uint64_t seed = 0;  // reserved; every subcommand is deterministic
  Output out;
  std::string format = "auto";
  app.add_option("--hbar", hbar, "Planck constant scale (default 1)")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "tolerance for classification / residual checks");
  app.add_option("--seed", seed, "seed (accepted for interface stability; all subcommands are deterministic)");
  app.add_option("--out", out.path, "output path (default stdout)");
  app.add_option("--format", format, "json|csv (default chosen by subcommand)")
      ->check(CLI::IsMember({"auto", "json", "csv"}));

  std::string matrix_path, matrix2_path, state_path, state2_path, symbol_path;

  auto* c_classify = app.add_subcommand("classify", "symplectic / antisymplectic / neither");
  c_classify->add_option("matrix", matrix_path)->required();
  auto* c_witness = app.add_subcommand("witness", "classification plus a non-preservation witness G");
  c_witness->add_option("matrix", matrix_path)->required();
  auto* c_williamson = app.add_subcommand("williamson", "symplectic diagonalization of an SPD matrix");
  c_williamson->add_option("matrix", matrix_path)->required();
  auto* c_sympeig = app.add_subcommand("sympeig", "symplectic spectrum of an SPD matrix");
  c_sympeig->add_option("matrix", matrix_path)->required();
  auto* c_capacity = app.add_subcommand("capacity", "symplectic capacity of the ellipsoid Gz.z <= 1");
  c_capacity->add_option("matrix", matrix_path)->required();
  auto* c_ballcheck = app.add_subcommand("ballcheck", "detect a symplectic ball and report its radius");
  c_ballcheck->add_option("matrix", matrix_path)->required();
  auto* c_gausswigner = app.add_subcommand("gausswigner", "covariance form G of a Gaussian state (X, Y)");
  c_gausswigner->add_option("state", matrix_path)->required();
  auto* c_refute = app.add_subcommand("refute", "covariance dichotomy report for a linear map");
  c_refute->add_option("matrix", matrix_path)->required();
  auto* c_wigner = app.add_subcommand("wigner", "Wigner transform of a sampled state (CSV out)");
  c_wigner->add_option("state", state_path)->required();
  auto* c_covcheck = app.add_subcommand("covcheck", "symplectic covariance residual of the Wigner transform");
  c_covcheck->add_option("matrix", matrix_path)->required();
  c_covcheck->add_option("state", state_path)->required();
  auto* c_anticov = app.add_subcommand("anticovcheck", "antisymplectic covariance residual");
  c_anticov->add_option("matrix", matrix_path)->required();
  c_anticov->add_option("state", state_path)->required();
  auto* c_weyl = app.add_subcommand("weyl", "apply the Weyl operator of a sampled symbol (CSV out)");
  c_weyl->add_option("symbol", symbol_path)->required();
  c_weyl->add_option("state", state_path)->required();
  auto* c_weylcov = app.add_subcommand("weylcov", "Weyl operator covariance residual");
  c_weylcov->add_option("symbol", symbol_path)->required();
  c_weylcov->add_option("matrix", matrix_path)->required();
  c_weylcov->add_option("state", state_path)->required();
  auto* c_pairing = app.add_subcommand("pairing", "Weyl pairing residual <A psi, conj(phi)> vs <<a, W(psi,phi)>>");
  c_pairing->add_option("symbol", symbol_path)->required();
  c_pairing->add_option("state", state_path)->required();
  c_pairing->add_option("state2", state2_path)->required();

  // global flags may appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  app.parse(argc, argv);
  (void)matrix2_path;

  auto require_json_format = [&] {
    if (format == "csv") throw std::invalid_argument("this subcommand only emits JSON");
  };
  auto finish_check = [&](double residual) {
    require_json_format();
    out.write(symcal::residual_report(residual, tol));
    return residual <= tol ? kExitOk : kExitCheckFailed;
  };

  if (*c_classify) {
    require_json_format();
    out.write(symcal::map_class_to_json(symcal::classify(load_matrix(matrix_path), tol)));
    return kExitOk;
  }
  if (*c_witness) {
    require_json_format();
    out.write(symcal::witness_to_json(symcal::lemma_witness(load_matrix(matrix_path), tol)));
    return kExitOk;
  }
  if (*c_williamson) {
    require_json_format();
    symcal::WilliamsonDecomposition d = symcal::williamson(load_matrix(matrix_path));
    out.write(json{{"S", symcal::matrix_to_json(d.S)}, {"sigma", d.sigma}, {"residual", d.residual}});
    return kExitOk;
  }
  if (*c_sympeig) {
    std::vector<double> sigma = symcal::symplectic_eigenvalues(load_matrix(matrix_path));
    if (format == "csv") {
      std::ostringstream os;
      os << "sigma\n";
      for (double v : sigma) os << symcal::format_double(v) << '\n';
      out.write(os.str());
    } else {
      out.write(json{{"sigma", sigma}});
    }
    return kExitOk;
  }
  if (*c_capacity) {
    require_json_format();
    out.write(json{{"capacity", symcal::capacity_ellipsoid({load_matrix(matrix_path)})}});
    return kExitOk;
  }
  if (*c_ballcheck) {
    require_json_format();
    std::optional<double> r = symcal::is_symplectic_ball({load_matrix(matrix_path)}, tol);
    json j{{"is_ball", r.has_value()}};
    if (r) j["radius"] = *r;
    out.write(j);
    return kExitOk;
  }
  if (*c_gausswigner) {
    require_json_format();
    json in = load_json(matrix_path);
    symcal::GaussianState s;
    s.n = in.at("n").get<std::size_t>();
    s.hbar = in.value("hbar", hbar);
    s.X = symcal::matrix_from_json(in.at("X"));
    s.Y = in.contains("Y") ? symcal::matrix_from_json(in.at("Y")) : Matrix(s.n);
    symcal::PhaseSpaceGaussian g = symcal::wigner_covariance(s);
    out.write(json{{"n", g.n}, {"hbar", g.hbar}, {"G", symcal::matrix_to_json(g.G)}});
    return kExitOk;
  }
  if (*c_refute) {
    require_json_format();
    out.write(symcal::refutation_to_json(symcal::theorem1_refutation(load_matrix(matrix_path), tol)));
    return kExitOk;
  }
  if (*c_wigner) {
    if (format == "json") throw std::invalid_argument("wigner emits CSV only");
    symcal::PhaseSpaceFunction w = symcal::wigner(load_state(state_path, hbar));
    std::ostringstream os;
    symcal::write_phasespace_csv(os, w);
    out.write(os.str());
    return kExitOk;
  }
  if (*c_covcheck)
    return finish_check(symcal::covariance_check(load_state(state_path, hbar), load_matrix(matrix_path)));
  if (*c_anticov)
    return finish_check(
        symcal::antisymplectic_covariance_check(load_state(state_path, hbar), load_matrix(matrix_path)));
  if (*c_weyl) {
    if (format == "json") throw std::invalid_argument("weyl emits CSV only");
    symcal::WaveFunction psi = load_state(state_path, hbar);
    symcal::WaveFunction apsi = symcal::weyl_apply(load_symbol(symbol_path, hbar), psi);
    std::ostringstream os;
    symcal::write_wavefunction_csv(os, apsi);
    out.write(os.str());
    return kExitOk;
  }
  if (*c_weylcov)
    return finish_check(symcal::weyl_covariance_check(load_symbol(symbol_path, hbar),
                                                      load_matrix(matrix_path), load_state(state_path, hbar)));
  if (*c_pairing)
    return finish_check(symcal::weyl_pairing_check(load_symbol(symbol_path, hbar),
                                                   load_state(state_path, hbar),
                                                   load_state(state2_path, hbar)));
  throw std::logic_error("unhandled subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    std::cerr << json{{"error", e.what()}}.dump() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << '\n';
    return kExitInputError;
  }
}
