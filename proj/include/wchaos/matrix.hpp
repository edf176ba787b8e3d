// Minimal dense square matrix plus a cyclic Jacobi eigenvalue solver for
// small symmetric matrices (covariances are at most a handful of rows).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wchaos {

struct Matrix {
  int n = 0;
  std::vector<double> a;  // row-major n*n

  Matrix() = default;
  explicit Matrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {
    if (n_ < 1) throw std::invalid_argument("Matrix: n must be positive");
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  bool is_symmetric(double tol = 0.0) const {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    return true;
  }
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, iterated
// until the off-diagonal Frobenius norm falls below 1e-12 (relative to the
// matrix scale). Returned in ascending order.
inline std::vector<double> jacobi_eigenvalues(Matrix m) {
  if (!m.is_symmetric(1e-14)) throw std::invalid_argument("jacobi_eigenvalues: matrix not symmetric");
  const int n = m.n;
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * m.at(i, j) * m.at(i, j);
    if (std::sqrt(off) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m.at(k, p), mkq = m.at(k, q);
          m.at(k, p) = c * mkp - s * mkq;
          m.at(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m.at(p, k), mqk = m.at(q, k);
          m.at(p, k) = c * mpk - s * mqk;
          m.at(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m.at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace wchaos
