#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcal {

/// Dense real square matrix, value semantics. Row-major storage.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}
  Matrix(std::size_t dim, std::vector<double> entries) : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim * dim) throw std::invalid_argument("Matrix: entry count does not match dim");
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diagonal(const std::vector<double>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) { return combine(o, 1.0); }
  Matrix& operator-=(const Matrix& o) { return combine(o, -1.0); }
  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("Matrix multiply: dimension mismatch");
    Matrix c(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    if (v.size() != dim_) throw std::invalid_argument("Matrix apply: dimension mismatch");
    std::vector<double> r(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }
  double max_abs() const {
    double s = 0.0;
    for (double v : data_) s = std::max(s, std::abs(v));
    return s;
  }

  bool is_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }
  bool is_symmetric(double tol = 1e-9) const { return (*this - transpose()).frobenius() <= tol * scale(); }
  bool is_antisymmetric(double tol = 1e-9) const { return (*this + transpose()).frobenius() <= tol * scale(); }
  bool is_orthogonal(double tol = 1e-9) const {
    return (transpose() * (*this) - identity(dim_)).frobenius() <= tol * scale();
  }

 private:
  double scale() const { return std::max(1.0, frobenius()); }
  Matrix& combine(const Matrix& o, double s) {
    if (dim_ != o.dim_) throw std::invalid_argument("Matrix add: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    return *this;
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) throw std::invalid_argument("inverse: singular matrix");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    double d = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

inline double determinant(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) == 0.0) return 0.0;
    if (piv != col) {
      det = -det;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // orthogonal, column i pairs with values[i]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Sweeps run until
/// the off-diagonal Frobenius mass drops below 1e-14 * ||A||, at most 100
/// sweeps. A = Q diag(values) Q^T.
inline SymEig sym_eig(const Matrix& a_in, double sym_tol = 1e-9) {
  const std::size_t n = a_in.dim();
  if (!a_in.is_symmetric(sym_tol)) {
    double defect = (a_in - a_in.transpose()).frobenius();
    throw std::invalid_argument("sym_eig: input not symmetric, defect " + std::to_string(defect));
  }
  Matrix a = 0.5 * (a_in + a_in.transpose());
  Matrix q = Matrix::identity(n);
  const double stop = 1e-14 * std::max(a.frobenius(), std::numeric_limits<double>::min());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        double apr = a(p, r);
        if (apr == 0.0) continue;
        double tau = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }
  SymEig out;
  out.values.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  out.vectors = Matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = q(k, order[i]);
  }
  return out;
}

inline bool is_spd(const Matrix& m, double tol = 1e-9) {
  if (!m.is_symmetric(tol)) return false;
  SymEig e = sym_eig(m, tol);
  return e.values.front() > tol * std::max(1.0, m.frobenius());
}

/// Symmetric positive definite square root: result R with R*R = N.
inline Matrix spd_sqrt(const Matrix& n_in) {
  SymEig e = sym_eig(n_in);
  const std::size_t n = n_in.dim();
  double scale = std::max(1.0, n_in.frobenius());
  if (e.values.front() <= 1e-12 * scale)
    throw std::invalid_argument("spd_sqrt: input not positive definite, min eigenvalue " +
                                std::to_string(e.values.front()));
  Matrix d(n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = std::sqrt(e.values[i]);
  return e.vectors * d * e.vectors.transpose();
}

struct PolarDecomposition {
  Matrix orthogonal;  // H
  Matrix spd;         // P, with M = H * P
};

/// Polar decomposition M = H P, H = M (M^T M)^{-1/2}, P = (M^T M)^{1/2}.
inline PolarDecomposition polar(const Matrix& m) {
  double d = determinant(m);
  if (std::abs(d) <= 1e-12 * std::max(1.0, std::pow(m.frobenius(), static_cast<double>(m.dim()))))
    throw std::invalid_argument("polar: singular matrix");
  Matrix p = spd_sqrt(m.transpose() * m);
  Matrix h = m * inverse(p);
  return {h, p};
}

struct AntisymmetricCanonical {
  Matrix rotation;             // orthogonal O
  std::vector<double> moduli;  // D, ascending; O^T K O = [[0, D],[-D, 0]]
};

/// Real canonical form of a nonsingular antisymmetric matrix of dim 2n:
/// O^T K O = [[0, diag(D)], [-diag(D), 0]] with D > 0 ascending.
/// Planes are extracted from the eigenspaces of K^T K as pairs (v, -Kv/|Kv|).
inline AntisymmetricCanonical antisymmetric_canonical(const Matrix& k, double tol = 1e-9) {
  const std::size_t dim = k.dim();
  if (dim % 2 != 0) throw std::invalid_argument("antisymmetric_canonical: odd dimension");
  if (!k.is_antisymmetric(tol)) throw std::invalid_argument("antisymmetric_canonical: input not antisymmetric");
  const std::size_t n = dim / 2;
  SymEig e = sym_eig(k.transpose() * k);  // eigenvalues d^2, each doubled
  double scale = std::max(1.0, k.frobenius());
  if (e.values.front() <= tol * tol * scale * scale)
    throw std::invalid_argument("antisymmetric_canonical: singular input");

  std::vector<std::vector<double>> vs, ws;
  std::vector<double> ds;
  // walk eigenvalues ascending, clustering equal ones; each cluster of
  // dimension 2m yields m planes
  std::size_t idx = 0;
  while (idx < dim) {
    std::size_t lo = idx;
    double mu = e.values[lo];
    std::size_t hi = lo;  // exclusive
    while (hi < dim && std::abs(e.values[hi] - mu) <= 1e-8 * std::max(1.0, mu)) ++hi;
    idx = hi;
    std::size_t want = (hi - lo) / 2;
    std::vector<std::vector<double>> cv, cw;
    for (std::size_t c = lo; c < hi && cv.size() < want; ++c) {
      std::vector<double> r(dim);
      for (std::size_t i = 0; i < dim; ++i) r[i] = e.vectors(i, c);
      // orthogonalize against planes already taken from this cluster
      for (std::size_t t = 0; t < cv.size(); ++t) {
        double pv = 0.0, pw = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          pv += cv[t][i] * r[i];
          pw += cw[t][i] * r[i];
        }
        for (std::size_t i = 0; i < dim; ++i) r[i] -= pv * cv[t][i] + pw * cw[t][i];
      }
      double nr = 0.0;
      for (double x : r) nr += x * x;
      nr = std::sqrt(nr);
      if (nr < 1e-6) continue;
      for (double& x : r) x /= nr;
      std::vector<double> kv = k.apply(r);
      double d = 0.0;
      for (double x : kv) d += x * x;
      d = std::sqrt(d);
      for (double& x : kv) x = -x / d;
      cv.push_back(r);
      cw.push_back(kv);
      ds.push_back(d);
    }
    if (cv.size() != want) throw std::runtime_error("antisymmetric_canonical: plane extraction failed");
    for (std::size_t t = 0; t < cv.size(); ++t) {
      vs.push_back(cv[t]);
      ws.push_back(cw[t]);
    }
  }
  if (vs.size() != n) throw std::runtime_error("antisymmetric_canonical: wrong plane count");

  AntisymmetricCanonical out;
  out.rotation = Matrix(dim);
  out.moduli = ds;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < dim; ++i) {
      out.rotation(i, c) = vs[c][i];
      out.rotation(i, n + c) = ws[c][i];
    }
  return out;
}

}  // namespace symcal
