#pragma once

// Action functional I, Pohozaev functional J, their first variations and the
// dilation projection onto the Pohozaev set {J = 0}.
//
// With K = int |grad u|^2 + |grad v|^2, M = int u^2 + v^2 and
// P = int F(u) + G(v) + (beta/2) u^2 v^2, the potential well is W = P - M/2 and
//   I = K/2 + M/2 - P,   J = K/2 - 3 W,   I - K/3 = J/3.
// Along the dilation ray u(./t): K -> t K, M -> t^3 M, P -> t^3 P.

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "cnls/error.hpp"
#include "cnls/nonlinearity.hpp"
#include "cnls/radial_grid.hpp"

namespace cnls {

struct EnergyParams {
  Nonlinearity f;
  Nonlinearity g;
  double beta = 0.0;
};

struct EnergyParts {
  double K_u = 0.0, K_v = 0.0;
  double M_u = 0.0, M_v = 0.0;
  double P = 0.0;

  double K() const { return K_u + K_v; }
  double M() const { return M_u + M_v; }
  double W() const { return P - 0.5 * M(); }
  double I() const { return 0.5 * K() + 0.5 * M() - P; }
  double J() const { return 0.5 * K() - 3.0 * W(); }
};

struct EnergyReport {
  double I = 0.0;
  double J = 0.0;
  double K = 0.0;
  double W = 0.0;
  double normH1_sq = 0.0;
  double residual_u = 0.0;
  double residual_v = 0.0;
};

inline EnergyParts energy_parts(const State& s, const EnergyParams& params) {
  const auto& g = s.grid();
  const auto u = s.u.values();
  const auto v = s.v.values();
  const auto w = g.weights();
  EnergyParts parts;
  parts.K_u = kinetic(s.u);
  parts.K_v = kinetic(s.v);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double uu = u[i] * u[i], vv = v[i] * v[i];
    parts.M_u += w[i] * uu;
    parts.M_v += w[i] * vv;
    parts.P += w[i] * (params.f.F(u[i]) + params.g.F(v[i]) + 0.5 * params.beta * uu * vv);
  }
  return parts;
}

inline double energy_I(const State& s, const EnergyParams& params) { return energy_parts(s, params).I(); }

inline double pohozaev_J(const State& s, const EnergyParams& params) { return energy_parts(s, params).J(); }

/// Weighted L^2 gradient of I: (-Lap u + u - f(u) - beta u v^2, -Lap v + v - g(v) - beta u^2 v),
/// with Lap the compact Laplacian. The Dirichlet node carries no equation and is 0.
inline std::pair<std::vector<double>, std::vector<double>> first_variation(const State& s,
                                                                           const EnergyParams& params) {
  const auto lu = compact_laplacian(s.u);
  const auto lv = compact_laplacian(s.v);
  const auto u = s.u.values();
  const auto v = s.v.values();
  const std::size_t n = u.size();
  std::vector<double> gu(n, 0.0), gv(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    gu[i] = -lu[i] + u[i] - params.f.f(u[i]) - params.beta * u[i] * v[i] * v[i];
    gv[i] = -lv[i] + v[i] - params.g.f(v[i]) - params.beta * u[i] * u[i] * v[i];
  }
  return {std::move(gu), std::move(gv)};
}

namespace detail {

inline double weighted_norm(const RadialGrid& g, std::span<const double> x) {
  const auto w = g.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * x[i] * x[i];
  return std::sqrt(sum);
}

}  // namespace detail

inline EnergyReport energy_report(const State& s, const EnergyParams& params) {
  const auto parts = energy_parts(s, params);
  const auto [gu, gv] = first_variation(s, params);
  EnergyReport rep;
  rep.I = parts.I();
  rep.J = parts.J();
  rep.K = parts.K();
  rep.W = parts.W();
  rep.normH1_sq = parts.K() + parts.M();
  rep.residual_u = detail::weighted_norm(s.grid(), gu) / (1.0 + std::sqrt(parts.K_u + parts.M_u));
  rep.residual_v = detail::weighted_norm(s.grid(), gv) / (1.0 + std::sqrt(parts.K_v + parts.M_v));
  return rep;
}

/// I at the point where the dilation ray through s meets {J = 0}:
/// (K/3)^{3/2} (2W)^{-1/2}. Invariant under dilation of s.
inline double projected_energy(const EnergyParts& parts) {
  const double W = parts.W();
  if (!(W > 0.0)) throw Error(ErrorCode::NoProjection, "potential well W <= 0");
  return std::pow(parts.K() / 3.0, 1.5) / std::sqrt(2.0 * W);
}

inline double projected_energy(const State& s, const EnergyParams& params) {
  return projected_energy(energy_parts(s, params));
}

struct Projection {
  State state;
  double t_bar;
};

/// Dilates s onto {J = 0}. The closed form t = sqrt(K / (6 W)) is exact in the
/// continuum; on the grid it seeds a bracketed root solve of J(dilate(s, t)) so
/// that the returned state has |J| at rounding level.
inline Projection project_pohozaev(const State& s, const EnergyParams& params) {
  if (s.is_zero()) throw Error(ErrorCode::ZeroState, "cannot project the zero state");
  const auto parts = energy_parts(s, params);
  const double W = parts.W();
  if (!(W > 0.0)) throw Error(ErrorCode::NoProjection, "potential well W <= 0; the dilation ray misses the Pohozaev set");
  const double K = parts.K();
  const double tol = 1e-13 * (1.0 + K);
  if (std::fabs(parts.J()) <= tol) return {s, 1.0};

  auto dilated = [&](double t) { return State(dilate(s.u, t), dilate(s.v, t)); };
  auto J_at = [&](double t) { return pohozaev_J(dilated(t), params); };

  const double t0 = std::sqrt(K / (6.0 * W));
  const double J0 = J_at(t0);
  if (std::fabs(J0) <= tol) return {dilated(t0), t0};

  // J > 0 below the root, J < 0 above it.
  double lo = t0, hi = t0, J_lo = J0, J_hi = J0;
  double factor = 1.0 + 1e-4;
  for (int k = 0; k < 60 && (J_lo < 0.0 || J_hi > 0.0); ++k) {
    if (J_lo < 0.0) { lo = t0 / factor; J_lo = J_at(lo); }
    if (J_hi > 0.0) { hi = t0 * factor; J_hi = J_at(hi); }
    factor *= 2.0;
  }
  if (J_lo < 0.0 || J_hi > 0.0) throw Error(ErrorCode::NoProjection, "could not bracket the Pohozaev dilation");

  boost::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      J_at, lo, hi, J_lo, J_hi,
      [&](double x, double y) { return std::fabs(y - x) <= 4e-16 * std::fabs(x); }, iters);
  const double Ja = J_at(a), Jb = J_at(b);
  const double t = std::fabs(Ja) <= std::fabs(Jb) ? a : b;
  return {dilated(t), t};
}

}  // namespace cnls
