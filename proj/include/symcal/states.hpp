#pragma once

#include <cmath>

#include "symcal/phasespace.hpp"

namespace symcal {

/// Samples the n=1 centered Gaussian psi_{X,Y} on a grid:
/// (pi hbar)^{-1/4} X^{1/4} exp(-(X + iY) x^2 / (2 hbar)).
inline WaveFunction gaussian_wavefunction(const Grid& g, double x_coef, double y_coef = 0.0) {
  if (x_coef <= 0.0) throw std::invalid_argument("gaussian_wavefunction: X must be positive");
  const double hbar = g.hbar;
  const double amp = std::pow(pi * hbar, -0.25) * std::pow(x_coef, 0.25);
  return sample_state(g, [=](double x) {
    double e = -0.5 * x_coef * x * x / hbar;
    double ph = -0.5 * y_coef * x * x / hbar;
    return std::polar(amp * std::exp(e), ph);
  });
}

/// First Hermite state x * Gaussian, L2-normalized.
inline WaveFunction hermite1_wavefunction(const Grid& g) {
  const double hbar = g.hbar;
  const double amp = std::sqrt(2.0 / hbar) * std::pow(pi * hbar, -0.25);
  return sample_state(g, [=](double x) { return cplx(amp * x * std::exp(-0.5 * x * x / hbar), 0.0); });
}

}  // namespace symcal
