#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "cnls/radial_grid.hpp"

namespace fixtures {

/// Sum of 1 to 3 Gaussian bumps a exp(-(r-c)^2 / (2 s^2)), a in [0.5,3],
/// c in [0,8], s in [0.5,2]; the number of bumps cycles with k.
inline cnls::Profile random_bumpy_profile(const cnls::GridPtr& grid, std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> A(0.5, 3.0), C(0.0, 8.0), S(0.5, 2.0);
  const int nb = 1 + k % 3;
  std::vector<std::array<double, 3>> bumps;
  for (int j = 0; j < nb; ++j) bumps.push_back({A(rng), C(rng), S(rng)});
  return cnls::Profile::sample(grid, [&](double r) {
    double s = 0.0;
    for (const auto& b : bumps) s += b[0] * std::exp(-(r - b[1]) * (r - b[1]) / (2.0 * b[2] * b[2]));
    return s;
  });
}

/// Smooth random profile that may change sign, for gradient checks.
inline cnls::Profile random_signed_profile(const cnls::GridPtr& grid, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), S(0.7, 2.0);
  const double a0 = amplitude * (1.0 + 0.5 * U(rng)), s0 = S(rng);
  const double a1 = 0.3 * amplitude * U(rng), c1 = 2.0 + U(rng), s1 = S(rng);
  return cnls::Profile::sample(grid, [&](double r) {
    return a0 * std::exp(-r * r / (2.0 * s0 * s0)) + a1 * std::exp(-(r - c1) * (r - c1) / (2.0 * s1 * s1));
  });
}

inline cnls::Profile gaussian(const cnls::GridPtr& grid, double amplitude, double width = 1.0) {
  return cnls::Profile::sample(grid, [&](double r) { return amplitude * std::exp(-r * r / (2.0 * width * width)); });
}

template <class Fn>
double integral_of(const cnls::Profile& p, Fn fn) {
  std::vector<double> s(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) s[i] = fn(p[i]);
  return cnls::integrate(p.grid(), s);
}

}  // namespace fixtures
