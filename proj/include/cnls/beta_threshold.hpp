#pragma once

// Coupling threshold: the explicit upper bound obtained by projecting the
// scalar pair (u0, v0) onto the Pohozaev set, and the solver-observed kind
// transition located by sweep and bisection.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnls/coupled_solver.hpp"
#include "cnls/energy.hpp"
#include "cnls/error.hpp"
#include "cnls/radial_grid.hpp"
#include "cnls/scalar_solver.hpp"

namespace cnls {

struct EnergyComparison {
  double lhs;  ///< projected energy of (u0, v0), an upper bound for the ground-state level
  double rhs;  ///< min{I(u0,0), I(0,v0)}
  bool beats;
};

inline EnergyComparison compare_energies(const EnergyParams& params, const ScalarGroundState& u0,
                                         const ScalarGroundState& v0) {
  if (!(params.beta > 0.0)) throw Error(ErrorCode::NegativeBeta, "energy comparison requires beta > 0");
  const double lhs = projected_energy(State(u0.profile, v0.profile), params);
  const double rhs = std::min(u0.action, v0.action);
  return {lhs, rhs, lhs < rhs};
}

struct SweepRow {
  double beta;
  bool ok = false;
  std::string error;
  double m = std::numeric_limits<double>::quiet_NaN();
  Kind kind = Kind::scalar_u;
  double scalar_min = std::numeric_limits<double>::quiet_NaN();
  bool vector_beats_scalar = false;
  double lhs_bound = std::numeric_limits<double>::quiet_NaN();
  bool beats = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<std::pair<double, double>> beta0_bracket;
};

/// One coupled solve per beta with shared scalar baselines. A failing beta is
/// recorded in its row and does not stop the sweep.
inline SweepResult sweep(const EnergyParams& params_base, const std::vector<double>& beta_list, const GridPtr& grid,
                         const SolveConfig& cfg, const ScalarBaselines& baselines) {
  for (std::size_t k = 1; k < beta_list.size(); ++k) {
    if (!(beta_list[k - 1] <= beta_list[k])) throw Error(ErrorCode::InvalidArgument, "beta_list must be sorted");
  }
  SweepResult out;
  const double scalar_min = std::min(baselines.u0.action, baselines.v0.action);
  for (double beta : beta_list) {
    SweepRow row;
    row.beta = beta;
    row.scalar_min = scalar_min;
    try {
      EnergyParams params = params_base;
      params.beta = beta;
      const auto cmp = compare_energies(params, baselines.u0, baselines.v0);
      row.lhs_bound = cmp.lhs;
      row.beats = cmp.beats;
      const auto gs = solve_coupled(params, grid, cfg, baselines);
      row.m = gs.energy;
      row.kind = gs.kind;
      row.vector_beats_scalar = gs.energy < scalar_min - 1e-9;
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  const SweepRow* prev = nullptr;
  for (const auto& row : out.rows) {
    if (!row.ok) continue;
    if (prev && is_scalar(prev->kind) != is_scalar(row.kind)) {
      out.beta0_bracket = std::make_pair(prev->beta, row.beta);
      break;
    }
    prev = &row;
  }
  return out;
}

inline SweepResult sweep(const EnergyParams& params_base, const std::vector<double>& beta_list, const GridPtr& grid,
                         const SolveConfig& cfg = {}, const ShootingConfig& shooting = {}) {
  if (beta_list.empty()) return {};
  return sweep(params_base, beta_list, grid, cfg, compute_baselines(params_base, grid, shooting));
}

/// Bisection on "ground state is vector" inside a bracket whose endpoints
/// disagree; returns the midpoint of the final interval of width < tol.
inline double bisect_beta0(const EnergyParams& params_base, std::pair<double, double> bracket, double tol,
                           const GridPtr& grid, const SolveConfig& cfg, const ScalarBaselines& baselines) {
  auto [lo, hi] = bracket;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::InvalidBracket, "bracket must satisfy lo < hi");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bisection tolerance must be positive");
  if (hi - lo < tol) return 0.5 * (lo + hi);

  auto is_vector = [&](double beta) {
    EnergyParams params = params_base;
    params.beta = beta;
    return solve_coupled(params, grid, cfg, baselines).kind == Kind::vector;
  };
  const bool lo_vec = is_vector(lo);
  const bool hi_vec = is_vector(hi);
  if (lo_vec == hi_vec) throw Error(ErrorCode::InvalidBracket, "bracket endpoints have the same kind");
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    (is_vector(mid) == lo_vec ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double bisect_beta0(const EnergyParams& params_base, std::pair<double, double> bracket, double tol,
                           const GridPtr& grid, const SolveConfig& cfg = {}, const ShootingConfig& shooting = {}) {
  if (bracket.second - bracket.first < tol && bracket.first < bracket.second && tol > 0.0) {
    return 0.5 * (bracket.first + bracket.second);
  }
  return bisect_beta0(params_base, bracket, tol, grid, cfg, compute_baselines(params_base, grid, shooting));
}

}  // namespace cnls
