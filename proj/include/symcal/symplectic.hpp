#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symcal/matrix.hpp"
#include "symcal/rng.hpp"

namespace symcal {

inline constexpr double pi = 3.14159265358979323846;

/// Standard symplectic matrix J = [[0, I], [-I, 0]] in (x, p) block ordering.
inline Matrix standard_J(std::size_t n) {
  if (n == 0) throw std::invalid_argument("standard_J: n must be positive");
  Matrix j(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

/// Reflection C = diag(I, -I), i.e. (x, p) -> (x, -p).
inline Matrix reflection_C(std::size_t n) {
  Matrix c = Matrix::identity(2 * n);
  for (std::size_t i = 0; i < n; ++i) c(n + i, n + i) = -1.0;
  return c;
}

enum class MapTag { Symplectic, Antisymplectic, Neither };

inline const char* to_string(MapTag t) {
  switch (t) {
    case MapTag::Symplectic: return "symplectic";
    case MapTag::Antisymplectic: return "antisymplectic";
    default: return "neither";
  }
}

struct MapClass {
  MapTag tag;
  double residual_symplectic;      // ||M^T J M - J||_F
  double residual_antisymplectic;  // ||M^T J M + J||_F
};

/// Classifies M as symplectic (M^T J M = J), antisymplectic (M^T J M = -J),
/// or neither, with both residuals reported.
inline MapClass classify(const Matrix& m, double tol = 1e-8) {
  if (m.dim() % 2 != 0 || m.dim() == 0) throw std::invalid_argument("classify: dimension must be even");
  const std::size_t n = m.dim() / 2;
  Matrix j = standard_J(n);
  Matrix mjm = m.transpose() * j * m;
  double rs = (mjm - j).frobenius();
  double ra = (mjm + j).frobenius();
  MapTag tag = MapTag::Neither;
  if (rs <= tol)
    tag = MapTag::Symplectic;
  else if (ra <= tol)
    tag = MapTag::Antisymplectic;
  return {tag, rs, ra};
}

namespace detail {

// Shared reduction behind the Williamson theorem: for SPD N of dim 2n, form
// the antisymmetric K = N^{-1/2} J N^{-1/2} and bring it to canonical form.
struct WilliamsonCore {
  Matrix n_sqrt_inv;
  Matrix rotation;             // columns reordered so moduli are ascending
  std::vector<double> moduli;  // ascending; symplectic eigenvalues are 1/moduli descending
};

inline WilliamsonCore williamson_core(const Matrix& n_mat) {
  if (n_mat.dim() % 2 != 0) throw std::invalid_argument("williamson: dimension must be even");
  if (!is_spd(n_mat)) throw std::invalid_argument("williamson: input not SPD");
  const std::size_t dim = n_mat.dim();
  const std::size_t n = dim / 2;
  Matrix nsi = inverse(spd_sqrt(n_mat));
  Matrix k = nsi * standard_J(n) * nsi;
  k = 0.5 * (k - k.transpose());
  AntisymmetricCanonical canon = antisymmetric_canonical(k);
  // moduli ascending, so the symplectic eigenvalues 1/moduli come out descending
  WilliamsonCore core;
  core.n_sqrt_inv = nsi;
  core.rotation = std::move(canon.rotation);
  core.moduli = std::move(canon.moduli);
  return core;
}

}  // namespace detail

/// Symplectic spectrum of an SPD matrix: the moduli of the eigenvalues
/// +/- i*lambda of J N, sorted descending.
inline std::vector<double> symplectic_eigenvalues(const Matrix& n_mat) {
  detail::WilliamsonCore core = detail::williamson_core(n_mat);
  std::vector<double> sigma(core.moduli.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = 1.0 / core.moduli[i];
  return sigma;
}

struct WilliamsonDecomposition {
  Matrix S;                   // symplectic
  std::vector<double> sigma;  // descending; S^T N S = diag(sigma, sigma)
  double residual;            // ||S^T N S - diag(sigma, sigma)||_F
};

/// Williamson diagonalization: S^T N S = diag(Sigma, Sigma) with S symplectic.
inline WilliamsonDecomposition williamson(const Matrix& n_mat) {
  detail::WilliamsonCore core = detail::williamson_core(n_mat);
  const std::size_t dim = n_mat.dim();
  const std::size_t n = dim / 2;
  Matrix scal(dim);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 1.0 / std::sqrt(core.moduli[i]);
    scal(i, i) = s;
    scal(n + i, n + i) = s;
  }
  WilliamsonDecomposition out;
  out.S = core.n_sqrt_inv * core.rotation * scal;
  out.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.sigma[i] = 1.0 / core.moduli[i];
  Matrix target(dim);
  for (std::size_t i = 0; i < n; ++i) {
    target(i, i) = out.sigma[i];
    target(n + i, n + i) = out.sigma[i];
  }
  out.residual = (out.S.transpose() * n_mat * out.S - target).frobenius();
  return out;
}

struct UnitaryDiagonalization {
  Matrix U;                    // orthogonal symplectic, block form [[A, -B], [B, A]]
  std::vector<double> lambda;  // >= 1, descending; G = U^T diag(lambda, 1/lambda) U
};

/// Diagonalizes G in Sp+(n) over the unitary subgroup:
/// G = U^T diag(Lambda, Lambda^{-1}) U with U in U(n) (embedded in Sp(n)).
inline UnitaryDiagonalization unitary_diagonalize_sp(const Matrix& g, double tol = 1e-8) {
  if (g.dim() % 2 != 0) throw std::invalid_argument("unitary_diagonalize_sp: dimension must be even");
  const std::size_t n = g.dim() / 2;
  if (!is_spd(g, tol)) throw std::invalid_argument("unitary_diagonalize_sp: input not SPD");
  MapClass cls = classify(g, tol * std::max(1.0, g.frobenius()));
  if (cls.tag != MapTag::Symplectic)
    throw std::invalid_argument("unitary_diagonalize_sp: input not symplectic, residual " +
                                std::to_string(cls.residual_symplectic));
  SymEig eig = sym_eig(g);
  Matrix j = standard_J(n);

  std::vector<std::vector<double>> rows;  // the n rows paired with lambda >= 1
  std::vector<double> lambda;
  auto column = [&](std::size_t c) {
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) v[i] = eig.vectors(i, c);
    return v;
  };
  // walk eigenvalues descending; the bottom-half partners 1/lambda are implied
  std::size_t idx = 2 * n;
  while (idx > 0 && rows.size() < n) {
    double val = eig.values[idx - 1];
    if (val > 1.0 + 1e-8) {
      rows.push_back(column(idx - 1));
      lambda.push_back(val);
      --idx;
    } else if (std::abs(val - 1.0) <= 1e-8) {
      // unit eigenspace: J-invariant, pick a basis u_1..u_m with u_i^T J u_j = 0
      std::size_t hi = idx;
      std::size_t lo = hi;
      while (lo > 0 && std::abs(eig.values[lo - 1] - 1.0) <= 1e-8) --lo;
      std::size_t m = (hi - lo) / 2;
      std::vector<std::vector<double>> chosen;
      for (std::size_t c = lo; c < hi && chosen.size() < m; ++c) {
        std::vector<double> r = column(c);
        for (const auto& u : chosen) {
          std::vector<double> ju = j.apply(u);
          double pu = 0.0, pj = 0.0;
          for (std::size_t i = 0; i < 2 * n; ++i) {
            pu += u[i] * r[i];
            pj += ju[i] * r[i];
          }
          for (std::size_t i = 0; i < 2 * n; ++i) r[i] -= pu * u[i] + pj * ju[i];
        }
        double nr = 0.0;
        for (double x : r) nr += x * x;
        nr = std::sqrt(nr);
        if (nr < 1e-6) continue;
        for (double& x : r) x /= nr;
        chosen.push_back(r);
      }
      if (chosen.size() != m) throw std::runtime_error("unitary_diagonalize_sp: unit eigenspace pairing failed");
      for (auto& u : chosen) {
        rows.push_back(u);
        lambda.push_back(1.0);
      }
      idx = lo;
    } else {
      break;  // entered the 1/lambda half
    }
  }
  if (rows.size() != n) throw std::runtime_error("unitary_diagonalize_sp: eigenvalue pairing failed");

  UnitaryDiagonalization out;
  out.U = Matrix(2 * n);
  out.lambda = lambda;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> ju = j.apply(rows[r]);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      out.U(r, i) = rows[r][i];
      out.U(n + r, i) = -ju[i];  // row for the 1/lambda partner
    }
  }
  return out;
}

struct Ellipsoid {
  Matrix G;  // SPD; the set is {z : Gz.z <= 1}
};

/// Symplectic capacity of an ellipsoid: pi / lambda_max(G).
inline double capacity_ellipsoid(const Ellipsoid& e) {
  std::vector<double> s = symplectic_eigenvalues(e.G);
  return pi / s.front();
}

/// Image ellipsoid {Kz : Gz.z <= 1}, with form (K^{-1})^T G K^{-1}.
inline Ellipsoid pushforward_ellipsoid(const Ellipsoid& e, const Matrix& k) {
  Matrix ki = inverse(k);
  return {ki.transpose() * e.G * ki};
}

/// Returns the radius r iff the ellipsoid is a symplectic ball, i.e. all
/// symplectic eigenvalues of G coincide at a common lambda; then r = lambda^{-1/2}.
inline std::optional<double> is_symplectic_ball(const Ellipsoid& e, double tol = 1e-8) {
  std::vector<double> s = symplectic_eigenvalues(e.G);
  double lo = s.back(), hi = s.front();
  if (hi - lo > tol * std::max(1.0, hi)) return std::nullopt;
  double lambda = 0.0;
  for (double v : s) lambda += v;
  lambda /= static_cast<double>(s.size());
  return 1.0 / std::sqrt(lambda);
}

struct WitnessResult {
  MapClass classification;
  std::optional<Matrix> witness_G;  // diag(X, X^{-1}) in Sp+(n), present iff Neither
  std::optional<double> witness_residual;
};

namespace detail {

inline Matrix block_diag_x(const Matrix& x) {
  const std::size_t n = x.dim();
  Matrix xi = inverse(x);
  Matrix g(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = x(i, j);
      g(n + i, n + j) = xi(i, j);
    }
  return g;
}

inline double symplecticity_residual(const Matrix& m) {
  const std::size_t n = m.dim() / 2;
  Matrix j = standard_J(n);
  return (m.transpose() * j * m - j).frobenius();
}

}  // namespace detail

/// Executable content of the characterization lemma: for a map that is neither
/// symplectic nor antisymplectic, finds G = diag(X, X^{-1}) in Sp+(n) such
/// that M^T G M fails to be symplectic. Deterministic stages first, then a
/// seeded random fallback; exhaustion is an error, never a silent pass.
inline WitnessResult lemma_witness(const Matrix& m, double tol = 1e-6) {
  const std::size_t dim = m.dim();
  if (dim % 2 != 0) throw std::invalid_argument("lemma_witness: dimension must be even");
  const std::size_t n = dim / 2;
  if (std::abs(determinant(m)) <= 1e-12) throw std::invalid_argument("lemma_witness: singular matrix");
  MapClass cls = classify(m, tol);
  if (cls.tag != MapTag::Neither) return {cls, std::nullopt, std::nullopt};

  auto try_x = [&](const Matrix& x) -> std::optional<std::pair<Matrix, double>> {
    Matrix g = detail::block_diag_x(x);
    double r = detail::symplecticity_residual(m.transpose() * g * m);
    if (r > tol) return std::make_pair(g, r);
    return std::nullopt;
  };

  std::vector<Matrix> candidates;
  candidates.push_back(Matrix::identity(n));  // stage 1
  {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i + 2);
    candidates.push_back(Matrix::diagonal(d));  // stage 2: Lambda = diag(2..n+1)
  }
  candidates.push_back(2.0 * Matrix::identity(n));  // stage 3
  for (std::size_t i = 0; i < n; ++i)               // stage 4: X = I + E^{(ij)}/2
    for (std::size_t j = i + 1; j < n; ++j) {
      Matrix x = Matrix::identity(n);
      x(i, j) = 0.5;
      x(j, i) = 0.5;
      candidates.push_back(x);
    }
  for (const Matrix& x : candidates)
    if (auto hit = try_x(x)) return {cls, hit->first, hit->second};

  Rng rng(0x5ca1ab1eULL);  // fallback draws are deterministic
  for (int draw = 0; draw < 64; ++draw) {
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Matrix x = a.transpose() * a + 0.1 * Matrix::identity(n);
    if (auto hit = try_x(x)) return {cls, hit->first, hit->second};
  }
  throw std::runtime_error("lemma_witness: no witness found after deterministic stages and 64 random draws");
}

/// Seeded random symplectic matrix: product of 3-8 generators drawn from
/// {J, diag(L, L^{-T}), [[I, 0], [P, I]]}.
inline Matrix random_symplectic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_symplectic: n must be positive");
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1ULL);
  std::size_t count = 3 + rng.below(6);
  Matrix s = Matrix::identity(2 * n);
  for (std::size_t g = 0; g < count; ++g) {
    switch (rng.below(3)) {
      case 0:
        s = s * standard_J(n);
        break;
      case 1: {
        Matrix l(n);
        double det = 0.0;
        do {
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) l(i, j) = (i == j ? 1.0 : 0.0) + rng.uniform(-0.4, 0.4);
          det = determinant(l);
        } while (std::abs(det) < 0.2);
        Matrix lti = inverse(l).transpose();
        Matrix gen(2 * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            gen(i, j) = l(i, j);
            gen(n + i, n + j) = lti(i, j);
          }
        s = s * gen;
        break;
      }
      default: {
        Matrix gen = Matrix::identity(2 * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i; j < n; ++j) {
            double v = rng.uniform(-0.5, 0.5);
            gen(n + i, j) = v;
            gen(n + j, i) = v;
          }
        s = s * gen;
        break;
      }
    }
  }
  return s;
}

}  // namespace symcal
