#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symcal/fft.hpp"
#include "symcal/matrix.hpp"
#include "symcal/symplectic.hpp"

namespace symcal {

/// 1-D sampling grid: N samples (power of two) over [-L/2, L/2).
/// x_k = (k - N/2) dx. The conjugate FFT axis has spacing dp = 2*pi*hbar/L;
/// phase-space images produced by the Wigner transform live on the finer
/// half-spacing axis pi*hbar/L (see PhaseSpaceFunction::dp).
struct Grid {
  std::size_t size;
  double length;
  double hbar = 1.0;

  double dx() const { return length / static_cast<double>(size); }
  double dp() const { return 2.0 * pi * hbar / length; }
  double x(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(size) / 2.0) * dx(); }
  double p(std::size_t m) const { return (static_cast<double>(m) - static_cast<double>(size) / 2.0) * dp(); }

  void validate() const {
    if (!is_power_of_two(size)) throw std::invalid_argument("Grid: size must be a power of two");
    if (length <= 0.0 || hbar <= 0.0) throw std::invalid_argument("Grid: length and hbar must be positive");
  }
  bool operator==(const Grid& o) const { return size == o.size && length == o.length && hbar == o.hbar; }
};

struct WaveFunction {
  Grid grid;
  std::vector<cplx> samples;
  bool accuracy_warning = false;  // set when an operation pushed support toward the boundary

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& v : samples) s += std::norm(v);
    return s * grid.dx();
  }
  double norm() const { return std::sqrt(norm_sq()); }
};

/// Sampled function on phase space, N x N row-major (x-index, p-index).
/// Carries its own momentum spacing dp: Wigner images use pi*hbar/L, Weyl
/// symbols use the full FFT spacing 2*pi*hbar/L.
struct PhaseSpaceFunction {
  Grid grid;
  double dp;
  std::vector<cplx> samples;

  cplx& at(std::size_t k, std::size_t j) { return samples[k * grid.size + j]; }
  cplx at(std::size_t k, std::size_t j) const { return samples[k * grid.size + j]; }
  double p(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(grid.size) / 2.0) * dp;
  }
};

inline WaveFunction sample_state(const Grid& g, const std::function<cplx(double)>& f) {
  g.validate();
  WaveFunction w{g, std::vector<cplx>(g.size), false};
  for (std::size_t k = 0; k < g.size; ++k) w.samples[k] = f(g.x(k));
  return w;
}

/// Samples a symbol on the full-spacing momentum axis (usable by weyl_apply).
inline PhaseSpaceFunction sample_symbol(const Grid& g, const std::function<cplx(double, double)>& f) {
  g.validate();
  PhaseSpaceFunction a{g, g.dp(), std::vector<cplx>(g.size * g.size)};
  for (std::size_t k = 0; k < g.size; ++k)
    for (std::size_t j = 0; j < g.size; ++j) a.at(k, j) = f(g.x(k), g.p(j));
  return a;
}

inline WaveFunction conjugate(const WaveFunction& psi) {
  WaveFunction out = psi;
  for (cplx& v : out.samples) v = std::conj(v);
  return out;
}

/// Cross-Wigner transform W(psi, phi) on the half-spacing momentum axis.
/// Per x-row the y-integral runs over the integer-pair lattice y = 2m dx
/// (no half-step interpolation), followed by an FFT. The states are treated
/// as zero outside the grid: wrapping the indices instead would add a ghost
/// image displaced by L/2 whose tail pollutes wide states at the 1e-6 level.
inline PhaseSpaceFunction cross_wigner(const WaveFunction& psi, const WaveFunction& phi) {
  if (!(psi.grid == phi.grid)) throw std::invalid_argument("cross_wigner: grid mismatch");
  psi.grid.validate();
  const std::size_t n = psi.grid.size;
  const double hbar = psi.grid.hbar;
  PhaseSpaceFunction w{psi.grid, pi * hbar / psi.grid.length, std::vector<cplx>(n * n)};
  const double pref = psi.grid.dx() / (pi * hbar);  // (2 dx) / (2 pi hbar)
  std::vector<cplx> row(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      // centered offset: bins m < n/2 are +y, bins m >= n/2 are -y
      long off = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
      long ip = static_cast<long>(k) + off;
      long im = static_cast<long>(k) - off;
      bool in = ip >= 0 && im >= 0 && ip < static_cast<long>(n) && im < static_cast<long>(n);
      row[m] = in ? psi.samples[static_cast<std::size_t>(ip)] *
                        std::conj(phi.samples[static_cast<std::size_t>(im)])
                  : cplx(0.0, 0.0);
    }
    fft_pow2(row);  // row[q] = sum_m f_m exp(-2 pi i m q / N)
    for (std::size_t j = 0; j < n; ++j) {
      // target bin q = (j - N/2) mod N
      std::size_t q = (j + n / 2) & (n - 1);
      w.at(k, j) = pref * row[q];
    }
  }
  return w;
}

inline PhaseSpaceFunction wigner(const WaveFunction& psi) { return cross_wigner(psi, psi); }

// ---------------------------------------------------------------------------
// Metaplectic operators
// ---------------------------------------------------------------------------

struct MetaplecticFactor {
  enum class Kind { Chirp, FourierJ, Dilation };
  Kind kind;
  double parameter = 0.0;  // chirp strength c, or dilation factor l
};

inline Matrix factor_matrix(const MetaplecticFactor& f) {
  Matrix m = Matrix::identity(2);
  switch (f.kind) {
    case MetaplecticFactor::Kind::Chirp:
      m(1, 0) = f.parameter;
      break;
    case MetaplecticFactor::Kind::FourierJ:
      m = standard_J(1);
      break;
    case MetaplecticFactor::Kind::Dilation:
      m(0, 0) = f.parameter;
      m(1, 1) = 1.0 / f.parameter;
      break;
  }
  return m;
}

/// Factors a 2x2 symplectic matrix into at most 5 metaplectic generators.
/// Factors are listed in application order (first entry acts first); the
/// matrix product of the reversed list reproduces S.
inline std::vector<MetaplecticFactor> factor_symplectic_2x2(const Matrix& s) {
  if (s.dim() != 2) throw std::invalid_argument("factor_symplectic_2x2: need a 2x2 matrix");
  if (std::abs(determinant(s) - 1.0) > 1e-10)
    throw std::invalid_argument("factor_symplectic_2x2: matrix not symplectic (det != 1)");
  const double a = s(0, 0), b = s(0, 1), c = s(1, 0), d = s(1, 1);
  using K = MetaplecticFactor::Kind;
  // S = C(d/b) * J * D(1/b) * C(a/b); the dilation 1/b blows up intermediate
  // states when |b| is small, so only used when b is the dominant entry
  auto b_path = [](double aa, double bb, double dd) {
    return std::vector<MetaplecticFactor>{
        {K::Chirp, aa / bb}, {K::Dilation, 1.0 / bb}, {K::FourierJ, 0.0}, {K::Chirp, dd / bb}};
  };
  if (std::abs(b) >= std::abs(a) && std::abs(b) > 1e-10) return b_path(a, b, d);
  if (std::abs(b) <= 1e-10) {
    // lower triangular (a != 0 since det = 1): S = C(c/a) * D(a)
    return {{K::Dilation, a}, {K::Chirp, c / a}};
  }
  // |a| > |b| > 0: route through J first, S = (S * (-J)) * J, where
  // S * (-J) = [[b, -a], [d, -c]] has a dominant upper-right entry
  std::vector<MetaplecticFactor> f{{K::FourierJ, 0.0}};
  for (MetaplecticFactor g : b_path(b, -a, -c)) f.push_back(g);
  return f;
}

inline Matrix factorization_matrix(const std::vector<MetaplecticFactor>& fs) {
  Matrix m = Matrix::identity(2);
  for (const MetaplecticFactor& f : fs) m = factor_matrix(f) * m;
  return m;
}

namespace detail {

inline void apply_chirp(WaveFunction& psi, double c) {
  const double hbar = psi.grid.hbar;
  for (std::size_t k = 0; k < psi.grid.size; ++k) {
    double x = psi.grid.x(k);
    double ph = 0.5 * c * x * x / hbar;
    psi.samples[k] *= cplx(std::cos(ph), std::sin(ph));
  }
}

// hbar-scaled Fourier transform (2 pi i hbar)^{-1/2} Int exp(-i x x'/hbar) psi(x') dx',
// evaluated back on the x-grid via a fractional DFT (the grid is generally not
// Fourier-self-dual, so a plain FFT does not land on it).
inline void apply_fourier_j(WaveFunction& psi) {
  const double hbar = psi.grid.hbar;
  const double dx = psi.grid.dx();
  double theta = dx * dx / hbar;
  std::vector<cplx> g = fractional_dft(psi.samples, theta);
  // (2 pi i hbar)^{-1/2} with the principal branch: i^{-1/2} = exp(-i pi/4)
  cplx pref = std::polar(1.0 / std::sqrt(2.0 * pi * hbar), -pi / 4.0) * dx;
  for (std::size_t k = 0; k < psi.grid.size; ++k) psi.samples[k] = pref * g[k];
}

// psi(x) -> |l|^{-1/2} psi(x/l) by trigonometric (band-limited) resampling:
// recover centered Fourier coefficients, then evaluate the series on the
// scaled lattice with a fractional DFT.
inline void apply_dilation(WaveFunction& psi, double l) {
  if (l == 0.0) throw std::invalid_argument("metaplectic dilation: zero factor");
  const std::size_t n = psi.grid.size;
  std::vector<cplx> coef = fractional_dft(psi.samples, -2.0 * pi / static_cast<double>(n));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (cplx& c : coef) c *= inv_n;
  std::vector<cplx> out = fractional_dft(coef, 2.0 * pi / (l * static_cast<double>(n)));
  const double amp = 1.0 / std::sqrt(std::abs(l));
  for (std::size_t k = 0; k < n; ++k) psi.samples[k] = amp * out[k];
  const double al = std::abs(l);
  double peak = 0.0;
  for (const cplx& v : psi.samples) peak = std::max(peak, std::abs(v));
  if (al < 1.0) {
    // compression evaluates the trig series over 1/|l| periods: samples beyond
    // |x| = |l| L/2 are wrapped images of the state, not values of psi(x/l),
    // and the state is taken to vanish there
    const double bound = al * psi.grid.length / 2.0;
    double edge = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double ax = std::abs(psi.grid.x(k));
      if (ax >= bound - psi.grid.dx())
        psi.samples[k] = cplx(0.0, 0.0);
      else if (ax >= bound - 5.0 * psi.grid.dx())
        edge = std::max(edge, std::abs(psi.samples[k]));
    }
    if (edge > 1e-10 * peak) psi.accuracy_warning = true;
  } else if (al > 1.0) {
    double edge = std::max({std::abs(psi.samples[0]), std::abs(psi.samples[1]),
                            std::abs(psi.samples[n - 1]), std::abs(psi.samples[n - 2])});
    if (edge > 1e-10 * peak) psi.accuracy_warning = true;
  }
}

}  // namespace detail

/// Applies the metaplectic lift of a 2x2 symplectic matrix to a sampled state.
/// The lift is fixed by the factorization's principal-branch square roots; the
/// double-cover sign ambiguity does not affect any Wigner-level identity.
inline WaveFunction metaplectic_apply(const Matrix& s, const WaveFunction& psi_in) {
  std::vector<MetaplecticFactor> fs = factor_symplectic_2x2(s);
  WaveFunction psi = psi_in;
  for (const MetaplecticFactor& f : fs) {
    switch (f.kind) {
      case MetaplecticFactor::Kind::Chirp: detail::apply_chirp(psi, f.parameter); break;
      case MetaplecticFactor::Kind::FourierJ: detail::apply_fourier_j(psi); break;
      case MetaplecticFactor::Kind::Dilation: detail::apply_dilation(psi, f.parameter); break;
    }
  }
  return psi;
}

namespace detail {

inline Matrix inverse_2x2_symplectic(const Matrix& s) {
  Matrix i(2);
  i(0, 0) = s(1, 1);
  i(0, 1) = -s(0, 1);
  i(1, 0) = -s(1, 0);
  i(1, 1) = s(0, 0);
  return i;
}

inline double catmull_rom(double fm1, double f0, double f1, double f2, double t) {
  return 0.5 * ((2.0 * f0) + (-fm1 + f1) * t + (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2) * t * t +
                (-fm1 + 3.0 * f0 - 3.0 * f1 + f2) * t * t * t);
}

inline cplx catmull_rom(cplx fm1, cplx f0, cplx f1, cplx f2, double t) {
  return {catmull_rom(fm1.real(), f0.real(), f1.real(), f2.real(), t),
          catmull_rom(fm1.imag(), f0.imag(), f1.imag(), f2.imag(), t)};
}

// Bicubic interpolation of a phase-space sample field; outside the grid the
// field is treated as zero (test states decay below 1e-12 at the boundary).
inline cplx interpolate(const PhaseSpaceFunction& f, double x, double p) {
  const std::size_t n = f.grid.size;
  const double dx = f.grid.dx();
  double fk = x / dx + static_cast<double>(n) / 2.0;
  double fj = p / f.dp + static_cast<double>(n) / 2.0;
  double k0f = std::floor(fk), j0f = std::floor(fj);
  double tx = fk - k0f, tp = fj - j0f;
  long k0 = static_cast<long>(k0f), j0 = static_cast<long>(j0f);
  auto sample = [&](long k, long j) -> cplx {
    if (k < 0 || j < 0 || k >= static_cast<long>(n) || j >= static_cast<long>(n)) return {0.0, 0.0};
    return f.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
  };
  cplx col[4];
  for (long dk = -1; dk <= 2; ++dk)
    col[dk + 1] = catmull_rom(sample(k0 + dk, j0 - 1), sample(k0 + dk, j0), sample(k0 + dk, j0 + 1),
                              sample(k0 + dk, j0 + 2), tp);
  return catmull_rom(col[0], col[1], col[2], col[3], tx);
}

inline bool inside(const PhaseSpaceFunction& f, double x, double p) {
  const double n2 = static_cast<double>(f.grid.size) / 2.0;
  return std::abs(x) <= (n2 - 2.0) * f.grid.dx() && std::abs(p) <= (n2 - 2.0) * f.dp;
}

// Phase-space field refined along p by trigonometric interpolation, so the
// cubic p-interpolation error drops by the cube of the refinement factor.
struct RefinedField {
  std::size_t nx, np;
  double dx, dp;  // fine momentum spacing
  std::vector<cplx> v;

  cplx at(std::size_t k, std::size_t j) const { return v[k * np + j]; }
};

inline RefinedField refine_p(const PhaseSpaceFunction& f, std::size_t factor) {
  const std::size_t n = f.grid.size;
  const std::size_t m = n * factor;
  RefinedField out{n, m, f.grid.dx(), f.dp / static_cast<double>(factor), std::vector<cplx>(n * m)};
  std::vector<cplx> row(n), pad(m);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) row[j] = f.at(k, j);
    fft_pow2(row);
    std::fill(pad.begin(), pad.end(), cplx(0.0, 0.0));
    for (std::size_t q = 0; q < n / 2; ++q) pad[q] = row[q];
    for (std::size_t q = n / 2 + 1; q < n; ++q) pad[m - n + q] = row[q];
    pad[n / 2] = 0.5 * row[n / 2];  // split the Nyquist bin symmetrically
    pad[m - n / 2] = 0.5 * row[n / 2];
    fft_pow2(pad, true);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) out.v[k * m + j] = inv_n * pad[j];
  }
  return out;
}

inline cplx interpolate(const RefinedField& f, double x, double p) {
  double fk = x / f.dx + static_cast<double>(f.nx) / 2.0;
  double fj = p / f.dp + static_cast<double>(f.np) / 2.0;
  double k0f = std::floor(fk), j0f = std::floor(fj);
  double tx = fk - k0f, tp = fj - j0f;
  long k0 = static_cast<long>(k0f), j0 = static_cast<long>(j0f);
  auto sample = [&](long k, long j) -> cplx {
    if (k < 0 || j < 0 || k >= static_cast<long>(f.nx) || j >= static_cast<long>(f.np)) return {0.0, 0.0};
    return f.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j));
  };
  cplx col[4];
  for (long dk = -1; dk <= 2; ++dk)
    col[dk + 1] = catmull_rom(sample(k0 + dk, j0 - 1), sample(k0 + dk, j0), sample(k0 + dk, j0 + 1),
                              sample(k0 + dk, j0 + 2), tp);
  return catmull_rom(col[0], col[1], col[2], col[3], tx);
}

// Shared core of the two covariance residuals: compares interpolate(w1, M z)
// against w2 on the grid. Points whose image leaves the grid are skipped, but
// the central disc |z| <= L/8 must stay covered or the comparison is void.
inline double covariance_residual(const PhaseSpaceFunction& w1, const PhaseSpaceFunction& w2,
                                  const Matrix& m, const char* who) {
  const std::size_t n = w1.grid.size;
  RefinedField fine = refine_p(w1, 4);
  double num = 0.0, den = 0.0;
  std::size_t covered = 0, central = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double x = w1.grid.x(k);
    for (std::size_t j = 0; j < n; ++j) {
      double p = w1.p(j);
      double mx = m(0, 0) * x + m(0, 1) * p;
      double mp = m(1, 0) * x + m(1, 1) * p;
      bool is_central = std::hypot(x, p) <= w1.grid.length / 8.0;
      if (is_central) ++central;
      if (!inside(w1, mx, mp)) continue;
      if (is_central) ++covered;
      cplx lhs = interpolate(fine, mx, mp);
      cplx rhs = w2.at(k, j);
      num += std::norm(lhs - rhs);
      den += std::norm(rhs);
    }
  }
  if (covered < central)
    throw std::invalid_argument(std::string(who) + ": map sends the central disc off the grid (" +
                                std::to_string(central - covered) + " points lost)");
  if (den == 0.0) throw std::invalid_argument(std::string(who) + ": transformed state vanishes");
  return std::sqrt(num / den);
}

}  // namespace detail

/// Relative L2 residual of the covariance identity W(psi)(Sz) = W(S^{-1}-lifted
/// psi)(z), measured over every grid point whose image Sz stays on the grid.
inline double covariance_check(const WaveFunction& psi, const Matrix& s, double tol = 1e-8) {
  MapClass cls = classify(s, tol * std::max(1.0, s.frobenius() * s.frobenius()));
  if (cls.tag != MapTag::Symplectic)
    throw std::invalid_argument("covariance_check: map not symplectic, residual " +
                                std::to_string(cls.residual_symplectic));
  PhaseSpaceFunction w1 = wigner(psi);
  WaveFunction psi2 = metaplectic_apply(detail::inverse_2x2_symplectic(s), psi);
  PhaseSpaceFunction w2 = wigner(psi2);
  return detail::covariance_residual(w1, w2, s, "covariance_check");
}

/// Residual of the antisymplectic identity W(psi)(Mz) = W(S^{-1}-lifted
/// conj(psi))(z) with S = C M.
inline double antisymplectic_covariance_check(const WaveFunction& psi, const Matrix& m, double tol = 1e-8) {
  MapClass cls = classify(m, tol * std::max(1.0, m.frobenius() * m.frobenius()));
  if (cls.tag != MapTag::Antisymplectic)
    throw std::invalid_argument("antisymplectic_covariance_check: map not antisymplectic, residual " +
                                std::to_string(cls.residual_antisymplectic));
  Matrix s = reflection_C(1) * m;
  PhaseSpaceFunction w1 = wigner(psi);
  WaveFunction psi2 = metaplectic_apply(detail::inverse_2x2_symplectic(s), conjugate(psi));
  PhaseSpaceFunction w2 = wigner(psi2);
  return detail::covariance_residual(w1, w2, m, "antisymplectic_covariance_check");
}

// ---------------------------------------------------------------------------
// Weyl operators
// ---------------------------------------------------------------------------

/// Applies the Weyl operator with symbol a (sampled on the full momentum axis):
///   A psi(x_j) = (2 pi hbar)^{-1} sum_{k,m} e^{i p_m (x_j - y_k)/hbar}
///                a((x_j + y_k)/2, p_m) psi(y_k) dy dp.
/// The p-sum is an FFT per midpoint row; midpoints land on the half-step x
/// lattice, where a is evaluated by cubic interpolation along x.
inline WaveFunction weyl_apply(const PhaseSpaceFunction& a, const WaveFunction& psi) {
  if (!(a.grid == psi.grid)) throw std::invalid_argument("weyl_apply: grid mismatch");
  if (std::abs(a.dp - a.grid.dp()) > 1e-12 * a.grid.dp())
    throw std::invalid_argument("weyl_apply: symbol must be sampled at the full momentum spacing");
  const std::size_t n = psi.grid.size;
  // kernel rows B[s][q] = sum_m a(mid_s, p_m) exp(2 pi i (m - N/2) q / N)
  std::vector<std::vector<cplx>> b(2 * n - 1, std::vector<cplx>(n));
  for (std::size_t s = 0; s < 2 * n - 1; ++s) {
    std::vector<cplx>& row = b[s];
    if (s % 2 == 0) {
      for (std::size_t m = 0; m < n; ++m) row[m] = a.at(s / 2, m);
    } else {
      long k0 = static_cast<long>(s / 2);
      auto col = [&](long k, std::size_t m) -> cplx {
        if (k < 0 || k >= static_cast<long>(n)) return {0.0, 0.0};
        return a.at(static_cast<std::size_t>(k), m);
      };
      for (std::size_t m = 0; m < n; ++m)
        row[m] = detail::catmull_rom(col(k0 - 1, m), col(k0, m), col(k0 + 1, m), col(k0 + 2, m), 0.5);
    }
    fft_pow2(row, true);  // row[q] = sum_m a_m exp(+2 pi i m q / N)
    for (std::size_t q = 0; q < n; ++q)
      if (q & 1) row[q] = -row[q];  // centering phase (-1)^q
  }
  WaveFunction out{psi.grid, std::vector<cplx>(n), psi.accuracy_warning};
  const double pref = psi.grid.dx() * psi.grid.dp() / (2.0 * pi * psi.grid.hbar);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t q = (j + n - k) & (n - 1);
      acc += b[j + k][q] * psi.samples[k];
    }
    out.samples[j] = pref * acc;
  }
  return out;
}

/// Deviation in the pairing identity <A psi, conj(phi)> = << a, W(psi, phi) >>,
/// normalized by ||a|| ||psi|| ||phi||. The phase-space quadrature runs over
/// the points where the symbol axis and the Wigner axis coincide.
inline double weyl_pairing_check(const PhaseSpaceFunction& a, const WaveFunction& psi,
                                 const WaveFunction& phi) {
  if (!(a.grid == psi.grid) || !(psi.grid == phi.grid))
    throw std::invalid_argument("weyl_pairing_check: grid mismatch");
  const std::size_t n = psi.grid.size;
  WaveFunction apsi = weyl_apply(a, psi);
  cplx lhs(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) lhs += apsi.samples[k] * std::conj(phi.samples[k]);
  lhs *= psi.grid.dx();

  PhaseSpaceFunction w = cross_wigner(psi, phi);
  cplx rhs(0.0, 0.0);
  // symbol momentum p_m coincides with Wigner axis index j = 2m - N/2
  for (std::size_t m = n / 4; m < 3 * n / 4; ++m) {
    std::size_t j = 2 * m - n / 2;
    for (std::size_t k = 0; k < n; ++k) rhs += a.at(k, m) * w.at(k, j);
  }
  rhs *= psi.grid.dx() * psi.grid.dp();

  double norm_a = 0.0;
  for (const cplx& v : a.samples) norm_a += std::norm(v);
  norm_a = std::sqrt(norm_a * psi.grid.dx() * psi.grid.dp());
  double scale = norm_a * psi.norm() * phi.norm();
  if (scale == 0.0) throw std::invalid_argument("weyl_pairing_check: degenerate inputs");
  return std::abs(lhs - rhs) / scale;
}

namespace detail {

inline double rel_l2_distance(const WaveFunction& u, const WaveFunction& v) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < u.samples.size(); ++k) {
    num += std::norm(u.samples[k] - v.samples[k]);
    den += std::norm(v.samples[k]);
  }
  if (den == 0.0) throw std::invalid_argument("rel_l2_distance: reference vanishes");
  return std::sqrt(num / den);
}

// Relative L2 distance minimized over a global unimodular factor. Metaplectic
// lifts are defined up to the double-cover phase, and lifting S and S^{-1}
// independently leaves exactly such a factor between U(S^{-1}) A U(S) and the
// operator of the composed symbol; the identity itself is projective.
inline double rel_l2_distance_phase(const WaveFunction& u, const WaveFunction& v) {
  double nu = 0.0, nv = 0.0;
  cplx inner(0.0, 0.0);
  for (std::size_t k = 0; k < u.samples.size(); ++k) {
    nu += std::norm(u.samples[k]);
    nv += std::norm(v.samples[k]);
    inner += u.samples[k] * std::conj(v.samples[k]);
  }
  if (nv == 0.0) throw std::invalid_argument("rel_l2_distance_phase: reference vanishes");
  (void)nu;
  // apply the optimal phase, then difference directly (the closed form
  // nu + nv - 2|inner| cancels catastrophically for nearly equal inputs)
  cplx phase = inner == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : std::conj(inner) / std::abs(inner);
  double num = 0.0;
  for (std::size_t k = 0; k < u.samples.size(); ++k) num += std::norm(phase * u.samples[k] - v.samples[k]);
  return std::sqrt(num / nv);
}

}  // namespace detail

/// Covariance residual for Weyl operators against the identity
/// S^{-1} A S <-> a o S, with the composed symbol sampled exactly from the
/// callable. Returns the relative L2 distance of the two operator outputs.
inline double weyl_covariance_check(const std::function<cplx(double, double)>& a_fn, const Matrix& s,
                                    const WaveFunction& psi, double tol = 1e-8) {
  MapClass cls = classify(s, tol * std::max(1.0, s.frobenius() * s.frobenius()));
  if (cls.tag != MapTag::Symplectic)
    throw std::invalid_argument("weyl_covariance_check: map not symplectic");
  PhaseSpaceFunction a = sample_symbol(psi.grid, a_fn);
  WaveFunction lhs =
      metaplectic_apply(detail::inverse_2x2_symplectic(s), weyl_apply(a, metaplectic_apply(s, psi)));
  PhaseSpaceFunction a_s = sample_symbol(psi.grid, [&](double x, double p) {
    return a_fn(s(0, 0) * x + s(0, 1) * p, s(1, 0) * x + s(1, 1) * p);
  });
  WaveFunction rhs = weyl_apply(a_s, psi);
  return detail::rel_l2_distance_phase(lhs, rhs);
}

/// Grid-sampled overload: a o S is rebuilt by bicubic resampling of the symbol
/// samples, so the result carries the interpolation error of that step.
inline double weyl_covariance_check(const PhaseSpaceFunction& a, const Matrix& s, const WaveFunction& psi,
                                    double tol = 1e-8) {
  MapClass cls = classify(s, tol * std::max(1.0, s.frobenius() * s.frobenius()));
  if (cls.tag != MapTag::Symplectic)
    throw std::invalid_argument("weyl_covariance_check: map not symplectic");
  WaveFunction lhs =
      metaplectic_apply(detail::inverse_2x2_symplectic(s), weyl_apply(a, metaplectic_apply(s, psi)));
  PhaseSpaceFunction a_s = sample_symbol(psi.grid, [&](double x, double p) {
    double sx = s(0, 0) * x + s(0, 1) * p;
    double sp = s(1, 0) * x + s(1, 1) * p;
    return detail::inside(a, sx, sp) ? detail::interpolate(a, sx, sp) : cplx(0.0, 0.0);
  });
  WaveFunction rhs = weyl_apply(a_s, psi);
  return detail::rel_l2_distance_phase(lhs, rhs);
}

/// Negative-control probe: measures the Weyl-covariance defect when a
/// non-symplectic M is substituted into a o M while the operator side uses the
/// metaplectic lift of a symplectic stand-in.
inline double weyl_covariance_defect(const std::function<cplx(double, double)>& a_fn, const Matrix& m,
                                     const Matrix& standin_s, const WaveFunction& psi) {
  PhaseSpaceFunction a = sample_symbol(psi.grid, a_fn);
  WaveFunction lhs = metaplectic_apply(detail::inverse_2x2_symplectic(standin_s),
                                       weyl_apply(a, metaplectic_apply(standin_s, psi)));
  PhaseSpaceFunction a_m = sample_symbol(psi.grid, [&](double x, double p) {
    return a_fn(m(0, 0) * x + m(0, 1) * p, m(1, 0) * x + m(1, 1) * p);
  });
  WaveFunction rhs = weyl_apply(a_m, psi);
  return detail::rel_l2_distance_phase(lhs, rhs);
}

}  // namespace symcal
