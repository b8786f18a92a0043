#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symcal/matrix.hpp"
#include "symcal/symplectic.hpp"

namespace symcal {

/// Centered Gaussian state psi_{X,Y}(x) ~ exp(-(X + iY) x.x / (2*hbar)),
/// L2-normalized by its prefactor. X SPD, Y symmetric, both n x n.
struct GaussianState {
  std::size_t n;
  double hbar = 1.0;
  Matrix X;
  Matrix Y;
};

/// Phase-space Gaussian (pi*hbar)^{-n} exp(-G z.z / hbar), G SPD of dim 2n.
struct PhaseSpaceGaussian {
  std::size_t n;
  double hbar = 1.0;
  Matrix G;
};

inline void validate(const GaussianState& s, double tol = 1e-9) {
  if (s.n == 0 || s.hbar <= 0.0) throw std::invalid_argument("GaussianState: bad n or hbar");
  if (s.X.dim() != s.n || s.Y.dim() != s.n) throw std::invalid_argument("GaussianState: block dims");
  if (!is_spd(s.X, tol)) throw std::invalid_argument("GaussianState: X not SPD");
  if (!s.Y.is_symmetric(tol)) throw std::invalid_argument("GaussianState: Y not symmetric");
}

/// Covariance form of the Wigner transform of psi_{X,Y}:
///   G = [[X + Y X^{-1} Y, Y X^{-1}], [X^{-1} Y, X^{-1}]],
/// always symmetric, SPD and symplectic.
inline PhaseSpaceGaussian wigner_covariance(const GaussianState& s) {
  validate(s);
  const std::size_t n = s.n;
  Matrix xi = inverse(s.X);
  Matrix yxi = s.Y * xi;
  Matrix xx = s.X + yxi * s.Y;
  Matrix g(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = xx(i, j);
      g(i, n + j) = yxi(i, j);
      g(n + i, j) = yxi(j, i);  // (X^{-1} Y)_{ij} = (Y X^{-1})_{ji}
      g(n + i, n + j) = xi(i, j);
    }
  g = 0.5 * (g + g.transpose());
  return {n, s.hbar, g};
}

/// Thrown when a phase-space Gaussian is not the Wigner transform of any
/// pure state; carries the offending symplectic spectrum.
class NotWignerRepresentable : public std::domain_error {
 public:
  explicit NotWignerRepresentable(std::vector<double> spectrum)
      : std::domain_error("phase-space Gaussian is not a Wigner transform: symplectic spectrum differs from 1"),
        spectrum_(std::move(spectrum)) {}
  const std::vector<double>& spectrum() const { return spectrum_; }

 private:
  std::vector<double> spectrum_;
};

/// Inverts wigner_covariance: X = (G_pp)^{-1}, Y = X G_px. Fails with the
/// symplectic spectrum when G is not symplectic (the covariance obstruction).
inline GaussianState from_wigner_covariance(const PhaseSpaceGaussian& ps, double tol = 1e-8) {
  const std::size_t n = ps.n;
  if (ps.G.dim() != 2 * n) throw std::invalid_argument("from_wigner_covariance: dim mismatch");
  if (!is_spd(ps.G)) throw std::invalid_argument("from_wigner_covariance: G not SPD");
  MapClass cls = classify(ps.G, tol * std::max(1.0, ps.G.frobenius()));
  if (cls.tag != MapTag::Symplectic) throw NotWignerRepresentable(symplectic_eigenvalues(ps.G));
  Matrix gpp(n), gpx(n), gxx(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      gxx(i, j) = ps.G(i, j);
      gpx(i, j) = ps.G(n + i, j);
      gpp(i, j) = ps.G(n + i, n + j);
    }
  GaussianState s;
  s.n = n;
  s.hbar = ps.hbar;
  s.X = inverse(gpp);
  s.X = 0.5 * (s.X + s.X.transpose());
  s.Y = s.X * gpx;
  s.Y = 0.5 * (s.Y + s.Y.transpose());
  // consistency of the xx block
  Matrix xx = s.X + s.Y * inverse(s.X) * s.Y;
  if ((xx - gxx).frobenius() > 1e-8 * std::max(1.0, ps.G.frobenius()))
    throw std::runtime_error("from_wigner_covariance: xx-block inconsistency");
  return s;
}

/// Pushes a phase-space Gaussian through a symplectic map: G' = S^{-T} G S^{-1}.
inline PhaseSpaceGaussian metaplectic_pushforward(const PhaseSpaceGaussian& ps, const Matrix& s,
                                                  double tol = 1e-8) {
  MapClass cls = classify(s, tol * std::max(1.0, s.frobenius() * s.frobenius()));
  if (cls.tag != MapTag::Symplectic)
    throw std::invalid_argument("metaplectic_pushforward: map not symplectic, residual " +
                                std::to_string(cls.residual_symplectic));
  Matrix si = inverse(s);
  Matrix g = si.transpose() * ps.G * si;
  return {ps.n, ps.hbar, 0.5 * (g + g.transpose())};
}

/// Complex conjugate of the state: Y -> -Y. The covariance form transforms
/// as G -> C G C with C = diag(I, -I).
inline GaussianState conjugate_state(const GaussianState& s) {
  GaussianState c = s;
  c.Y *= -1.0;
  return c;
}

/// True iff all symplectic eigenvalues of G equal 1 within tol, i.e. the form
/// is the Wigner covariance of a pure Gaussian state.
inline bool is_pure_wigner_gaussian(const PhaseSpaceGaussian& ps, double tol = 1e-8) {
  for (double v : symplectic_eigenvalues(ps.G))
    if (std::abs(v - 1.0) > tol) return false;
  return true;
}

enum class RefutationConclusion { CovariantSymplectic, CovariantAntisymplectic, NotWignerRepresentable };

inline const char* to_string(RefutationConclusion c) {
  switch (c) {
    case RefutationConclusion::CovariantSymplectic: return "CovariantSymplectic";
    case RefutationConclusion::CovariantAntisymplectic: return "CovariantAntisymplectic";
    default: return "NotWignerRepresentable";
  }
}

struct RefutationWitness {
  Matrix G_in;   // diag(X, X^{-1}) in Sp+(n)
  Matrix G_out;  // M^T G_in M
  std::vector<double> spectrum_out;
};

struct RefutationReport {
  MapClass classification;
  std::optional<RefutationWitness> witness;
  RefutationConclusion conclusion;
};

/// Decides whether composition with M can preserve Wigner-representability.
/// For a map that is neither symplectic nor antisymplectic, produces a witness
/// Gaussian whose pushed-forward covariance form has symplectic spectrum away
/// from 1 -- certifying that W(psi) o M is no Wigner transform.
inline RefutationReport theorem1_refutation(const Matrix& m, double tol = 1e-6) {
  WitnessResult wr = lemma_witness(m, tol);
  RefutationReport rep;
  rep.classification = wr.classification;
  if (wr.classification.tag == MapTag::Symplectic) {
    rep.conclusion = RefutationConclusion::CovariantSymplectic;
    return rep;
  }
  if (wr.classification.tag == MapTag::Antisymplectic) {
    rep.conclusion = RefutationConclusion::CovariantAntisymplectic;
    return rep;
  }
  RefutationWitness w;
  w.G_in = *wr.witness_G;
  Matrix g_out = m.transpose() * w.G_in * m;
  w.G_out = 0.5 * (g_out + g_out.transpose());
  w.spectrum_out = symplectic_eigenvalues(w.G_out);
  rep.witness = std::move(w);
  rep.conclusion = RefutationConclusion::NotWignerRepresentable;
  return rep;
}

}  // namespace symcal
