#pragma once

// Radial discretization of functions on R^3: uniform nodes on [0,R], 3D
// trapezoid weights, Laplacian stencils, dilation and Schwarz rearrangement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "cnls/detail/tridiag.hpp"
#include "cnls/error.hpp"

namespace cnls {

class RadialGrid {
 public:
  RadialGrid(double R, int N) : R_(R), N_(N) {
    if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::InvalidArgument, "grid radius must be positive");
    if (N < 64) throw Error(ErrorCode::InvalidArgument, "grid needs at least 64 intervals");
    h_ = R / N;
    r_.resize(N + 1);
    w_.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      r_[i] = i * h_;
      const double c = (i == 0 || i == N) ? 0.5 : 1.0;
      w_[i] = 4.0 * std::numbers::pi * r_[i] * r_[i] * h_ * c;
    }
    r_[N] = R;
  }

  double R() const { return R_; }
  int N() const { return N_; }
  double h() const { return h_; }
  std::size_t size() const { return r_.size(); }
  double r(std::size_t i) const { return r_[i]; }
  std::span<const double> nodes() const { return r_; }
  std::span<const double> weights() const { return w_; }

  bool operator==(const RadialGrid& other) const { return R_ == other.R_ && N_ == other.N_; }

 private:
  double R_;
  int N_;
  double h_;
  std::vector<double> r_;
  std::vector<double> w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(double R = 20.0, int N = 4000) {
  return std::make_shared<const RadialGrid>(R, N);
}

inline bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Radial samples at the grid nodes. The value at r = R is the Dirichlet
/// truncation and is always exactly zero.
class Profile {
 public:
  Profile(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw Error(ErrorCode::InvalidProfile, "profile without grid");
    if (values_.size() != grid_->size()) {
      throw Error(ErrorCode::LengthMismatch, "profile has " + std::to_string(values_.size()) +
                                                 " samples, grid has " + std::to_string(grid_->size()));
    }
    for (double x : values_) {
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidProfile, "non-finite profile sample");
    }
    if (values_.back() != 0.0) throw Error(ErrorCode::InvalidProfile, "profile must vanish at r = R");
  }

  static Profile zero(const GridPtr& grid) { return Profile(grid, std::vector<double>(grid->size(), 0.0)); }

  /// Samples fn at the nodes and clamps the last node to zero.
  static Profile sample(const GridPtr& grid, const std::function<double(double)>& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->r(i));
    v.back() = 0.0;
    return Profile(grid, std::move(v));
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  Profile scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return Profile(grid_, std::move(v));
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

struct State {
  Profile u;
  Profile v;

  State(Profile u_in, Profile v_in) : u(std::move(u_in)), v(std::move(v_in)) {
    if (!same_grid(u.grid_ptr(), v.grid_ptr())) {
      throw Error(ErrorCode::GridMismatch, "state components live on different grids");
    }
  }

  const RadialGrid& grid() const { return u.grid(); }
  const GridPtr& grid_ptr() const { return u.grid_ptr(); }

  bool is_zero() const {
    auto nz = [](double x) { return x != 0.0; };
    return std::none_of(u.values().begin(), u.values().end(), nz) &&
           std::none_of(v.values().begin(), v.values().end(), nz);
  }
};

// ---------------------------------------------------------------------------
// Quadrature and differential operators

/// sum_i w_i s_i, the trapezoid approximation of 4 pi int_0^R s(r) r^2 dr.
inline double integrate(const RadialGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) {
    throw Error(ErrorCode::LengthMismatch, "integrand length does not match grid");
  }
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += w[i] * samples[i];
  return sum;
}

/// Second-order central stencil for u'' + (2/r) u'. At r = 0 the symmetric
/// limit 3 u''(0) is used, at r = R a zero ghost value.
inline std::vector<double> laplacian(const Profile& p) {
  const auto& g = p.grid();
  const auto u = p.values();
  const double h = g.h();
  const double h2 = h * h;
  const std::size_t n = u.size();
  std::vector<double> out(n);
  out[0] = 6.0 * (u[1] - u[0]) / h2;
  for (std::size_t i = 1; i < n; ++i) {
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    out[i] = (right - 2.0 * u[i] + u[i - 1]) / h2 + (right - u[i - 1]) / (g.r(i) * h);
  }
  return out;
}

namespace detail {

/// y = B^{-1} A (r u) on the interior nodes, where A = tridiag(-1,2,-1)/h^2 and
/// B = tridiag(1,10,1)/12: the fourth-order compact approximation of -(r u)''.
/// Entries 0 and N of the result are zero.
inline std::vector<double> compact_operator(const RadialGrid& g, std::span<const double> u) {
  const int N = g.N();
  const double h2 = g.h() * g.h();
  std::vector<double> aw(N - 1);
  auto w = [&](int i) { return (i <= 0 || i >= N) ? 0.0 : g.r(i) * u[i]; };
  for (int i = 1; i < N; ++i) aw[i - 1] = (2.0 * w(i) - w(i - 1) - w(i + 1)) / h2;
  const auto y = solve_toeplitz_tridiagonal(1.0 / 12.0, 10.0 / 12.0, aw);
  std::vector<double> out(N + 1, 0.0);
  std::copy(y.begin(), y.end(), out.begin() + 1);
  return out;
}

/// Value at r = 0 of the even function through samples at h, 2h, 3h.
inline double even_extrapolate(double at_h, double at_2h, double at_3h) {
  return 1.5 * at_h - 0.6 * at_2h + 0.1 * at_3h;
}

}  // namespace detail

/// Fourth-order compact Laplacian. This is the operator whose quadratic form
/// defines kinetic(); node 0 is filled by even extrapolation and the Dirichlet
/// node R carries no equation (reported as 0).
inline std::vector<double> compact_laplacian(const Profile& p) {
  const auto& g = p.grid();
  const auto y = detail::compact_operator(g, p.values());
  std::vector<double> out(g.size(), 0.0);
  for (int i = 1; i < g.N(); ++i) out[i] = -y[i] / g.r(i);
  out[0] = detail::even_extrapolate(out[1], out[2], out[3]);
  return out;
}

/// Discrete int |grad u|^2 over R^3: 4 pi h sum_i (r_i u_i) (B^{-1} A (r u))_i.
inline double kinetic(const Profile& p) {
  const auto& g = p.grid();
  const auto u = p.values();
  const auto y = detail::compact_operator(g, u);
  double sum = 0.0;
  for (int i = 1; i < g.N(); ++i) sum += g.r(i) * u[i] * y[i];
  return 4.0 * std::numbers::pi * g.h() * sum;
}

/// r -> p(r / t), linear interpolation on the source nodes, zero beyond R.
inline Profile dilate(const Profile& p, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonpositiveDilation, "dilation factor must be positive");
  if (t == 1.0) return p;
  const auto& g = p.grid();
  const auto u = p.values();
  const int N = g.N();
  std::vector<double> out(g.size(), 0.0);
  for (int i = 0; i < N; ++i) {
    const double x = g.r(i) / t / g.h();
    if (x >= N) break;
    const int k = static_cast<int>(x);
    const double frac = x - k;
    out[i] = (1.0 - frac) * u[k] + frac * u[k + 1];
  }
  out[N] = 0.0;
  return Profile(p.grid_ptr(), std::move(out));
}

namespace detail {

// Monotone piecewise-cubic Hermite interpolant of nonnegative radial samples
// and the volume of its super-level sets, used to build the symmetric
// decreasing rearrangement.
class LevelSetVolume {
 public:
  LevelSetVolume(const RadialGrid& g, std::vector<double> u) : g_(g), u_(std::move(u)) {
    const int N = g_.N();
    const double h = g_.h();
    std::vector<double> secant(N);
    for (int k = 0; k < N; ++k) secant[k] = (u_[k + 1] - u_[k]) / h;
    slope_.assign(N + 1, 0.0);
    for (int i = 1; i < N; ++i) {
      const double a = secant[i - 1], b = secant[i];
      if (a * b <= 0.0) continue;
      double d = 0.5 * (a + b);
      const double cap = 3.0 * std::min(std::fabs(a), std::fabs(b));
      if (std::fabs(d) > cap) d = std::copysign(cap, d);
      slope_[i] = d;
    }
    slope_[N] = secant[N - 1];

    int k = 0;
    while (k < N) {
      const int dir = sign(u_[k + 1] - u_[k]);
      int end = k + 1;
      while (end < N && sign(u_[end + 1] - u_[end]) == dir) ++end;
      runs_.push_back({k, end, dir});
      k = end;
    }
  }

  /// Volume of {x in B_R : p(|x|) > s}.
  double operator()(double s) const {
    double mu = 0.0;
    for (const auto& run : runs_) {
      const double ua = u_[run.first], ub = u_[run.last];
      const double full = ball(g_.r(run.last)) - ball(g_.r(run.first));
      if (run.dir == 0) {
        if (s < ua) mu += full;
      } else if (run.dir < 0) {
        if (s >= ua) continue;
        if (s < ub) { mu += full; continue; }
        int lo = run.first, hi = run.last;  // u[lo] > s >= u[hi]
        while (hi - lo > 1) {
          const int mid = (lo + hi) / 2;
          (u_[mid] > s ? lo : hi) = mid;
        }
        mu += ball(crossing(lo, s)) - ball(g_.r(run.first));
      } else {
        if (s >= ub) continue;
        if (s < ua) { mu += full; continue; }
        int lo = run.first, hi = run.last;  // u[lo] <= s < u[hi]
        while (hi - lo > 1) {
          const int mid = (lo + hi) / 2;
          (u_[mid] <= s ? lo : hi) = mid;
        }
        mu += ball(g_.r(run.last)) - ball(crossing(lo, s));
      }
    }
    return mu;
  }

  static double ball(double r) { return 4.0 / 3.0 * std::numbers::pi * r * r * r; }

 private:
  struct Run {
    int first;
    int last;
    int dir;
  };

  static int sign(double x) { return (x > 0.0) - (x < 0.0); }

  double eval(int k, double tau) const {
    const double t2 = tau * tau, t3 = t2 * tau;
    const double h = g_.h();
    return (2 * t3 - 3 * t2 + 1) * u_[k] + (t3 - 2 * t2 + tau) * h * slope_[k] +
           (-2 * t3 + 3 * t2) * u_[k + 1] + (t3 - t2) * h * slope_[k + 1];
  }

  // Radius in [r_k, r_{k+1}] where the (monotone) cubic on interval k equals s.
  double crossing(int k, double s) const {
    const double fa = u_[k] - s, fb = u_[k + 1] - s;
    if (fa == 0.0) return g_.r(k);
    if (fb == 0.0) return g_.r(k + 1);
    boost::uintmax_t iters = 64;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        [&](double tau) { return eval(k, tau) - s; }, 0.0, 1.0, fa, fb,
        boost::math::tools::eps_tolerance<double>(50), iters);
    return g_.r(k) + 0.5 * (lo + hi) * g_.h();
  }

  const RadialGrid& g_;
  std::vector<double> u_;
  std::vector<double> slope_;
  std::vector<Run> runs_;
};

}  // namespace detail

/// Schwarz symmetrization: the radially nonincreasing profile whose
/// super-level sets have the same 3D volume as those of |p|. Volumes are
/// measured on the monotone cubic interpolant of the samples; nonincreasing
/// input is returned unchanged.
inline Profile rearrange(const Profile& p) {
  const auto& g = p.grid();
  std::vector<double> u(p.values().begin(), p.values().end());
  for (double& x : u) x = std::fabs(x);
  bool decreasing = true;
  for (std::size_t i = 1; i < u.size() && decreasing; ++i) decreasing = u[i] <= u[i - 1];
  if (decreasing) return Profile(p.grid_ptr(), std::move(u));

  const double top = *std::max_element(u.begin(), u.end());
  const detail::LevelSetVolume mu(g, u);
  const int N = g.N();
  std::vector<double> out(g.size(), 0.0);
  out[0] = top;
  const double support = mu(0.0);
  double prev = top;
  for (int j = 1; j < N; ++j) {
    const double target = detail::LevelSetVolume::ball(g.r(j));
    if (support <= target) break;
    auto phi = [&](double s) { return mu(s) - target; };
    const double f_lo = support - target;
    const double f_hi = phi(prev);
    if (f_hi >= 0.0) {
      out[j] = prev;
      continue;
    }
    boost::uintmax_t iters = 100;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        phi, 0.0, prev, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
    out[j] = std::min(prev, 0.5 * (lo + hi));
    prev = out[j];
  }
  out[N] = 0.0;
  return Profile(p.grid_ptr(), std::move(out));
}

}  // namespace cnls
