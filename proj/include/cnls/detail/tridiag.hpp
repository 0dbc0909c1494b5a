#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cnls::detail {

/// Thomas algorithm for a diagonally dominant tridiagonal system.
/// lower[i] couples row i to i-1 (lower[0] unused), upper[i] couples i to i+1.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), x(n);
  double denom = diag[0];
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

/// Constant-coefficient symmetric tridiagonal solve: off-diagonal `off`, diagonal `d`.
inline std::vector<double> solve_toeplitz_tridiagonal(double off, double d,
                                                      std::span<const double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n), x(n);
  double denom = d;
  c[0] = off / denom;
  x[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = d - off * c[i - 1];
    c[i] = off / denom;
    x[i] = (rhs[i] - off * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace cnls::detail
