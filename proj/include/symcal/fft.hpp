#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace symcal {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 FFT, kernel exp(-2*pi*i*m*q/N) (forward) or its conjugate
/// (inverse). No normalization is applied in either direction.
inline void fft_pow2(std::vector<cplx>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft_pow2: length must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double pi = 3.14159265358979323846;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

/// Centered fractional DFT via Bluestein's algorithm:
///   g[j] = sum_k f[k] * exp(-i * theta * (j - N/2) * (k - N/2)),  j,k = 0..N-1
/// for an arbitrary real kernel step theta. Reduces to the centered DFT for
/// theta = 2*pi/N. Cost O(N log N); N need not be a power of two.
inline std::vector<cplx> fractional_dft(const std::vector<cplx>& f, double theta) {
  const std::size_t n = f.size();
  if (n == 0) return {};
  const double c = static_cast<double>(n) / 2.0;  // center offset N/2
  // j'k' = (j'^2 + k'^2 - (j'-k')^2)/2 with j' = j - N/2, k' = k - N/2
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
  auto chirp = [&](double t) {  // exp(+i*theta*t^2/2)
    double ph = 0.5 * theta * t * t;
    return cplx(std::cos(ph), std::sin(ph));
  };
  for (std::size_t k = 0; k < n; ++k) {
    double kk = static_cast<double>(k) - c;
    u[k] = f[k] * std::conj(chirp(kk));
  }
  // v holds the chirp at signed offsets -(n-1)..(n-1), wrapped mod m
  for (std::size_t d = 0; d < n; ++d) {
    double dd = static_cast<double>(d);
    v[d] = chirp(dd);
    if (d != 0) v[m - d] = chirp(-dd);
  }
  fft_pow2(u);
  fft_pow2(v);
  for (std::size_t i = 0; i < m; ++i) u[i] *= v[i];
  fft_pow2(u, true);
  const double inv_m = 1.0 / static_cast<double>(m);
  std::vector<cplx> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    double jj = static_cast<double>(j) - c;
    g[j] = std::conj(chirp(jj)) * u[j] * inv_m;
  }
  return g;
}

}  // namespace symcal
