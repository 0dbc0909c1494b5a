#pragma once

// Radial ground state of -Lap w + w = f(w) by shooting on w(0) with
// bisection between undershoot (w' turns positive) and overshoot (w crosses
// zero), followed by a Newton polish on the grid equations.

#include <cmath>
#include <string_view>
#include <vector>

#include "cnls/detail/newton.hpp"
#include "cnls/energy.hpp"
#include "cnls/error.hpp"
#include "cnls/nonlinearity.hpp"
#include "cnls/radial_grid.hpp"

namespace cnls {

struct ShootingConfig {
  double a_min = 0.1;
  double a_max = 50.0;
  double ode_step = 0.0;         ///< 0 selects h/4 of the target grid
  int max_bisect = 200;
  double classify_radius = 0.0;  ///< 0 selects the grid radius R
};

enum class ShotKind { Crosses, TurnsUp, Decays };

constexpr std::string_view to_string(ShotKind k) {
  switch (k) {
    case ShotKind::Crosses: return "Crosses";
    case ShotKind::TurnsUp: return "TurnsUp";
    case ShotKind::Decays: return "Decays";
  }
  return "Unknown";
}

struct ShotResult {
  ShotKind kind;
  double radius;  ///< where the outcome was decided
};

struct ScalarGroundState {
  Profile profile;
  double center_value;  ///< shooting value a*
  double action;        ///< I_F(profile)
  double residual;
};

namespace detail {

inline ShootingConfig resolve(ShootingConfig cfg, const RadialGrid& g) {
  if (!(cfg.ode_step > 0.0)) cfg.ode_step = g.h() / 4.0;
  if (!(cfg.classify_radius > 0.0)) cfg.classify_radius = g.R();
  return cfg;
}

struct Trajectory {
  std::vector<double> r, w, dw;
};

// RK4 on (w, w') for w'' = -(2/r) w' + w - f(w); at r = 0 the regular limit
// w'' = (w - f(w)) / 3 applies.
inline ShotResult integrate_shot(const Nonlinearity& nl, double a, const ShootingConfig& cfg, Trajectory* traj) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::NonpositiveAmplitude, "shooting amplitude must be positive");
  const double R = cfg.classify_radius > 0.0 ? cfg.classify_radius : 20.0;
  const double dr = cfg.ode_step > 0.0 ? cfg.ode_step : 20.0 / 4000.0 / 4.0;
  if (!(a < 1e6)) throw Error(ErrorCode::Blowup, "amplitude exceeds blowup threshold");

  auto accel = [&](double r, double w, double dw) {
    return r == 0.0 ? (w - nl.f(w)) / 3.0 : -2.0 * dw / r + w - nl.f(w);
  };
  double r = 0.0, w = a, dw = 0.0;
  if (traj) {
    traj->r.assign(1, r);
    traj->w.assign(1, w);
    traj->dw.assign(1, dw);
  }
  const auto steps = static_cast<long>(std::ceil(R / dr - 1e-9));
  for (long k = 0; k < steps; ++k) {
    const double s = std::min(dr, R - r);
    const double k1w = dw, k1v = accel(r, w, dw);
    const double k2w = dw + 0.5 * s * k1v, k2v = accel(r + 0.5 * s, w + 0.5 * s * k1w, k2w);
    const double k3w = dw + 0.5 * s * k2v, k3v = accel(r + 0.5 * s, w + 0.5 * s * k2w, k3w);
    const double k4w = dw + s * k3v, k4v = accel(r + s, w + s * k3w, k4w);
    w += s / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    dw += s / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    r = (k + 1 == steps) ? R : r + s;
    if (traj) {
      traj->r.push_back(r);
      traj->w.push_back(w);
      traj->dw.push_back(dw);
    }
    if (!std::isfinite(w) || std::fabs(w) > 1e6) throw Error(ErrorCode::Blowup, "shooting trajectory exceeded 1e6");
    if (w < 0.0) return {ShotKind::Crosses, r};
    if (dw >= 0.0) return {ShotKind::TurnsUp, r};
    if (w < 1e-9) return {ShotKind::Decays, r};
  }
  return {ShotKind::Decays, R};
}

// Samples the trajectory on the grid up to its last trusted radius and
// continues with the linearized tail c e^{-r}/r beyond it.
inline Profile profile_from_trajectory(const GridPtr& grid, const Trajectory& t, double r_cut) {
  std::size_t last = 0;
  while (last + 1 < t.r.size() && t.r[last + 1] <= r_cut) ++last;
  const double r_t = t.r[last], w_t = t.w[last];
  std::vector<double> out(grid->size(), 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
    const double r = grid->r(i);
    if (r <= r_t && last > 0) {
      while (k + 1 < last && t.r[k + 1] < r) ++k;
      const double h = t.r[k + 1] - t.r[k];
      const double s = (r - t.r[k]) / h;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
      out[i] = h00 * t.w[k] + h10 * h * t.dw[k] + h01 * t.w[k + 1] + h11 * h * t.dw[k + 1];
    } else {
      out[i] = w_t * (r_t / r) * std::exp(-(r - r_t));
    }
  }
  return Profile(grid, std::move(out));
}

}  // namespace detail

inline ShotResult shoot(const Nonlinearity& nl, double a, const ShootingConfig& cfg = {}) {
  return detail::integrate_shot(nl, a, cfg, nullptr);
}

inline ScalarGroundState solve_scalar(const Nonlinearity& nl, const GridPtr& grid, const ShootingConfig& cfg_in = {}) {
  if (!(cfg_in.a_min > 0.0 && cfg_in.a_max > cfg_in.a_min)) {
    throw Error(ErrorCode::InvalidArgument, "shooting bracket needs 0 < a_min < a_max");
  }
  if (cfg_in.max_bisect < 1) throw Error(ErrorCode::InvalidArgument, "max_bisect must be positive");
  const auto cfg = detail::resolve(cfg_in, *grid);

  double lo = cfg.a_min, hi = cfg.a_max;
  const auto s_lo = shoot(nl, lo, cfg);
  const auto s_hi = shoot(nl, hi, cfg);
  if (s_lo.kind != ShotKind::TurnsUp || s_hi.kind != ShotKind::Crosses) {
    throw Error(ErrorCode::BracketFailure,
                "no undershoot/overshoot pair in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double a_star = 0.5 * (lo + hi);
  bool decayed = false;
  for (int k = 0; k < cfg.max_bisect; ++k) {
    a_star = 0.5 * (lo + hi);
    const auto s = shoot(nl, a_star, cfg);
    if (s.kind == ShotKind::Decays) {
      decayed = true;
      break;
    }
    (s.kind == ShotKind::TurnsUp ? lo : hi) = a_star;
    if (hi - lo < 1e-12 * lo) break;
  }

  detail::Trajectory traj;
  const double a_ref = decayed ? a_star : lo;
  const auto outcome = detail::integrate_shot(nl, a_ref, cfg, &traj);
  // Before an undershoot turns up it is bounded below by the true solution
  // only up to its minimum; cut there.
  const auto start = detail::profile_from_trajectory(grid, traj, outcome.radius);

  const EnergyParams scalar_params{nl, nl, 0.0};
  const auto polished = detail::newton_polish(State(start, Profile::zero(grid)), scalar_params);
  const Profile& u = polished.state.u;
  const double residual = energy_report(polished.state, scalar_params).residual_u;
  if (!(residual < 1e-6)) {
    throw Error(ErrorCode::NoConvergence, "scalar polish left residual " + std::to_string(residual));
  }
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (!(u[i] > 0.0)) throw Error(ErrorCode::NoConvergence, "polished scalar profile is not positive");
  }
  const double action = energy_I(State(u, Profile::zero(grid)), EnergyParams{nl, Nonlinearity::zero(), 0.0});
  return {u, a_star, action, residual};
}

}  // namespace cnls
