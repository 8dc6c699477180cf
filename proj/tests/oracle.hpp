#pragma once

// Reference implementations for test assertions. These deliberately avoid the
// library's own linear-algebra paths: the inverse is a hand-rolled
// Gauss-Jordan elimination and the singular value comes from the 2x2
// characteristic polynomial, so the values they produce are independent
// oracles for the production code.

#include <cassert>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ncjt/common.hpp"

namespace oracle {

using ncjt::Complex;

using CMatrix = std::vector<std::vector<Complex>>;

inline CMatrix identity(int n) {
  CMatrix m(n, std::vector<Complex>(n, 0.0));
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
inline CMatrix gauss_jordan_inverse(CMatrix a) {
  const int n = static_cast<int>(a.size());
  CMatrix inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) == 0.0) {
      throw std::runtime_error("singular matrix in oracle inverse");
    }
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Complex scale = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= scale;
      inv[col][c] /= scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = a[r][col];
      if (factor == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] -= factor * a[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

/// d^H R^-1 d with R assembled explicitly from the interferer columns.
inline double mmse_sinr(const std::vector<Complex>& desired,
                        const std::vector<std::vector<Complex>>& interferers,
                        double noise_power) {
  const int n = static_cast<int>(desired.size());
  CMatrix r(n, std::vector<Complex>(n, 0.0));
  for (const auto& g : interferers) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        r[i][j] += g[i] * std::conj(g[j]);
      }
    }
  }
  for (int i = 0; i < n; ++i) r[i][i] += noise_power;
  const CMatrix rinv = gauss_jordan_inverse(r);
  Complex sinr = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sinr += std::conj(desired[i]) * rinv[i][j] * desired[j];
    }
  }
  return sinr.real();
}

inline std::vector<Complex> to_std(const ncjt::CVec& v) {
  return {v.data(), v.data() + v.size()};
}

inline std::vector<std::vector<Complex>> to_std(
    const std::vector<ncjt::CVec>& vs) {
  std::vector<std::vector<Complex>> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(to_std(v));
  return out;
}

/// Largest singular value of a two-column matrix via the closed-form
/// eigenvalues of its 2x2 Gram matrix.
inline double sigma_max_two_cols(const Eigen::MatrixXcd& h) {
  assert(h.cols() == 2);
  Complex a = 0.0, b = 0.0, c = 0.0;
  for (int r = 0; r < h.rows(); ++r) {
    a += std::conj(h(r, 0)) * h(r, 0);
    b += std::conj(h(r, 0)) * h(r, 1);
    c += std::conj(h(r, 1)) * h(r, 1);
  }
  const double tr = a.real() + c.real();
  const double diff = a.real() - c.real();
  const double disc = std::sqrt(diff * diff / 4.0 + std::norm(b));
  return std::sqrt(tr / 2.0 + disc);
}

}  // namespace oracle
