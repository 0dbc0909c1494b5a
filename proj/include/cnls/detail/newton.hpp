#pragma once

// Damped Newton iteration on the discrete Euler-Lagrange system
//   A w_u - B g_u(w) = 0,  A w_v - B g_v(w) = 0,
// with w = r u, g_u = r (f(u) + beta u v^2) - w_u and the compact pair
// A = tridiag(-1,2,-1)/h^2, B = tridiag(1,10,1)/12 on the interior nodes.
// Unknowns are interleaved (u_1, v_1, u_2, v_2, ...) so the Jacobian is banded.

#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "cnls/energy.hpp"
#include "cnls/radial_grid.hpp"

namespace cnls::detail {

struct NewtonOptions {
  int max_iters = 40;
  double tol = 1e-11;  ///< on max(residual_u, residual_v) as reported by energy_report
};

struct NewtonResult {
  State state;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

class CompactSystem {
 public:
  CompactSystem(const GridPtr& grid, const EnergyParams& params) : grid_(grid), params_(params) {
    n_ = grid_->N() - 1;
  }

  Eigen::VectorXd pack(const State& s) const {
    Eigen::VectorXd z(2 * n_);
    for (int i = 1; i <= n_; ++i) {
      z[2 * (i - 1)] = grid_->r(i) * s.u[i];
      z[2 * (i - 1) + 1] = grid_->r(i) * s.v[i];
    }
    return z;
  }

  State unpack(const Eigen::VectorXd& z) const {
    const std::size_t m = grid_->size();
    std::vector<double> u(m, 0.0), v(m, 0.0);
    for (int i = 1; i <= n_; ++i) {
      u[i] = z[2 * (i - 1)] / grid_->r(i);
      v[i] = z[2 * (i - 1) + 1] / grid_->r(i);
    }
    u[0] = even_extrapolate(u[1], u[2], u[3]);
    v[0] = even_extrapolate(v[1], v[2], v[3]);
    return State(Profile(grid_, std::move(u)), Profile(grid_, std::move(v)));
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& z) const {
    const double h2 = grid_->h() * grid_->h();
    Eigen::VectorXd g(2 * n_);
    for (int i = 1; i <= n_; ++i) {
      const double r = grid_->r(i);
      const double wu = z[2 * (i - 1)], wv = z[2 * (i - 1) + 1];
      const double u = wu / r, v = wv / r;
      g[2 * (i - 1)] = r * (params_.f.f(u) + params_.beta * u * v * v) - wu;
      g[2 * (i - 1) + 1] = r * (params_.g.f(v) + params_.beta * u * u * v) - wv;
    }
    Eigen::VectorXd res(2 * n_);
    for (int k = 0; k < 2 * n_; ++k) {
      const double left_z = k >= 2 ? z[k - 2] : 0.0, right_z = k + 2 < 2 * n_ ? z[k + 2] : 0.0;
      const double left_g = k >= 2 ? g[k - 2] : 0.0, right_g = k + 2 < 2 * n_ ? g[k + 2] : 0.0;
      res[k] = (2.0 * z[k] - left_z - right_z) / h2 - (left_g + 10.0 * g[k] + right_g) / 12.0;
    }
    return res;
  }

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& z) const {
    const double h2 = grid_->h() * grid_->h();
    // Per-node 2x2 derivative blocks of g with respect to (w_u, w_v).
    std::vector<double> duu(n_), duv(n_), dvv(n_);
    for (int i = 1; i <= n_; ++i) {
      const double r = grid_->r(i);
      const double u = z[2 * (i - 1)] / r, v = z[2 * (i - 1) + 1] / r;
      duu[i - 1] = params_.f.df(u) + params_.beta * v * v - 1.0;
      dvv[i - 1] = params_.g.df(v) + params_.beta * u * u - 1.0;
      duv[i - 1] = 2.0 * params_.beta * u * v;
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(12 * n_));
    for (int i = 0; i < n_; ++i) {
      for (int j = std::max(0, i - 1); j <= std::min(n_ - 1, i + 1); ++j) {
        const double a = (i == j ? 2.0 : -1.0) / h2;
        const double b = (i == j ? 10.0 : 1.0) / 12.0;
        trips.emplace_back(2 * i, 2 * j, a - b * duu[j]);
        trips.emplace_back(2 * i + 1, 2 * j + 1, a - b * dvv[j]);
        if (duv[j] != 0.0) {
          trips.emplace_back(2 * i, 2 * j + 1, -b * duv[j]);
          trips.emplace_back(2 * i + 1, 2 * j, -b * duv[j]);
        }
      }
    }
    Eigen::SparseMatrix<double> J(2 * n_, 2 * n_);
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
  }

 private:
  GridPtr grid_;
  EnergyParams params_;
  int n_;
};

inline double max_residual(const State& s, const EnergyParams& params) {
  const auto rep = energy_report(s, params);
  return std::max(rep.residual_u, rep.residual_v);
}

/// Newton with backtracking on ||F||. Never returns a state with a larger
/// residual than the input.
inline NewtonResult newton_polish(const State& start, const EnergyParams& params, const NewtonOptions& opt = {}) {
  CompactSystem sys(start.grid_ptr(), params);
  Eigen::VectorXd z = sys.pack(start);
  Eigen::VectorXd F = sys.residual(z);
  double fnorm = F.norm();

  NewtonResult out{start, 0, false, max_residual(start, params)};
  if (out.residual <= opt.tol) {
    out.converged = true;
    return out;
  }
  State best = start;
  double best_res = out.residual;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 1; it <= opt.max_iters; ++it) {
    out.iterations = it;
    const auto J = sys.jacobian(z);
    lu.compute(J);
    if (lu.info() != Eigen::Success) break;
    const Eigen::VectorXd dz = lu.solve(F);
    if (lu.info() != Eigen::Success || !dz.allFinite()) break;

    double lambda = 1.0;
    bool accepted = false;
    Eigen::VectorXd z_new, F_new;
    for (int k = 0; k < 30; ++k) {
      z_new = z - lambda * dz;
      F_new = sys.residual(z_new);
      if (F_new.allFinite() && F_new.norm() < (1.0 - 1e-4 * lambda) * fnorm) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    z = z_new;
    F = F_new;
    fnorm = F.norm();

    State s = sys.unpack(z);
    const double res = max_residual(s, params);
    if (res < best_res) {
      best = s;
      best_res = res;
    }
    if (res <= opt.tol) break;
    if (dz.lpNorm<Eigen::Infinity>() * lambda <= 1e-15 * (1.0 + z.lpNorm<Eigen::Infinity>())) break;
  }
  out.state = best;
  out.residual = best_res;
  out.converged = best_res <= opt.tol;
  return out;
}

}  // namespace cnls::detail
