#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "cnls/energy.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cnls;
using Catch::Approx;

namespace {

const double pi32 = std::pow(std::numbers::pi, 1.5);

EnergyParams free_params(double beta) { return {Nonlinearity::zero(), Nonlinearity::zero(), beta}; }
EnergyParams cubic_params(double beta) { return {Nonlinearity::cubic(), Nonlinearity::cubic(), beta}; }

double weighted_dot(const RadialGrid& g, const std::vector<double>& a, const Profile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights()[i] * a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("action on closed-form states", "[energy]") {
  auto g = make_grid();
  const auto zero = Profile::zero(g);
  CHECK(energy_I(State(zero, zero), cubic_params(1.0)) == 0.0);

  const auto u = fixtures::gaussian(g, 1.0);
  const double single = 0.5 * (oracle::gauss_kinetic(1.0) + oracle::gauss_L2(1.0));
  CHECK(single == Approx(6.96041).epsilon(1e-5));
  CHECK(energy_I(State(u, zero), free_params(0.0)) == Approx(single).epsilon(1e-4));
  CHECK(energy_I(State(u, u), free_params(2.0)) == Approx(2.0 * single - oracle::gauss_L4(1.0)).epsilon(1e-4));
  CHECK(energy_I(State(u, u), free_params(2.0)) == Approx(11.95209).epsilon(1e-4));
}

TEST_CASE("Pohozaev functional on closed-form states", "[energy]") {
  auto g = make_grid();
  const auto zero = Profile::zero(g);
  const auto u = fixtures::gaussian(g, 1.0);
  CHECK(pohozaev_J(State(u, zero), free_params(0.0)) == Approx(2.25 * pi32).epsilon(1e-4));
  CHECK(pohozaev_J(State(zero, zero), cubic_params(1.0)) == 0.0);
}

TEST_CASE("I and J decompose into K, M, P", "[energy]") {
  auto g = make_grid();
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    const State s(fixtures::random_signed_profile(g, rng, 2.0), fixtures::random_signed_profile(g, rng, 1.5));
    const auto params = EnergyParams{Nonlinearity::log_enhanced(0.7), Nonlinearity::cubic(), 1.3};
    const double K = kinetic(s.u) + kinetic(s.v);
    std::vector<double> m(g->size()), p(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double a = s.u[i], b = s.v[i];
      m[i] = a * a + b * b;
      p[i] = params.f.F(a) + params.g.F(b) + 0.5 * params.beta * a * a * b * b;
    }
    const double M = integrate(*g, m), P = integrate(*g, p);
    CHECK(energy_I(s, params) == Approx(K / 2 + M / 2 - P).epsilon(1e-12));
    CHECK(pohozaev_J(s, params) == Approx(K / 2 - 3 * (P - M / 2)).epsilon(1e-12));
    const auto rep = energy_report(s, params);
    CHECK(rep.normH1_sq == Approx(K + M).epsilon(1e-12));
    CHECK(rep.I - rep.K / 3.0 == Approx(rep.J / 3.0).margin(1e-10 * (1 + rep.K)));
  }
}

TEST_CASE("first variation", "[energy]") {
  auto g = make_grid();
  const auto zero = Profile::zero(g);
  const auto [gu0, gv0] = first_variation(State(zero, zero), cubic_params(2.0));
  for (std::size_t i = 0; i < gu0.size(); ++i) {
    CHECK(gu0[i] == 0.0);
    CHECK(gv0[i] == 0.0);
  }

  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const auto params = k % 2 ? cubic_params(1.7) : EnergyParams{Nonlinearity::log_enhanced(1.0), Nonlinearity::cubic(), 0.4};
    const State s(fixtures::random_signed_profile(g, rng, 2.5), fixtures::random_signed_profile(g, rng, 2.0));
    const auto du = fixtures::random_signed_profile(g, rng, 1.0);
    const auto dv = fixtures::random_signed_profile(g, rng, 1.0);
    const double eps = 1e-5;
    auto shifted = [&](double e) {
      std::vector<double> a(g->size()), b(g->size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = s.u[i] + e * du[i];
        b[i] = s.v[i] + e * dv[i];
      }
      return State(Profile(g, a), Profile(g, b));
    };
    const double fd = (energy_I(shifted(eps), params) - energy_I(shifted(-eps), params)) / (2 * eps);
    const auto [gu, gv] = first_variation(s, params);
    const double an = weighted_dot(*g, gu, du) + weighted_dot(*g, gv, dv);
    CHECK(std::fabs(fd - an) <= 1e-5 * std::fabs(an));
  }
}

TEST_CASE("projection of the amplitude-3 Gaussian", "[energy]") {
  auto g = make_grid();
  const auto zero = Profile::zero(g);
  const State s(fixtures::gaussian(g, 3.0), zero);
  const auto params = cubic_params(0.0);
  const auto [t_ref, e_ref] = oracle::cubic_gaussian_projection(3.0);
  CHECK(t_ref == Approx(0.9197).margin(2e-4));
  CHECK(e_ref == Approx(23.046).margin(0.005));

  const auto proj = project_pohozaev(s, params);
  CHECK(proj.t_bar == Approx(t_ref).margin(1e-3));
  const double E = projected_energy(s, params);
  CHECK(E == Approx(e_ref).margin(0.05));
  const auto parts = energy_parts(s, params);
  CHECK(E == Approx(proj.t_bar * parts.K() / 3.0).epsilon(1e-3));

  const auto rep = energy_report(proj.state, params);
  CHECK(std::fabs(rep.J) <= 1e-8 * (1 + rep.K));
  CHECK(std::fabs(rep.I - rep.K / 3.0) <= 1e-8 * (1 + rep.K));
  CHECK(rep.I == Approx(E).epsilon(1e-4));

  const auto again = project_pohozaev(proj.state, params);
  CHECK(again.t_bar == 1.0);
}

TEST_CASE("projection failures", "[energy]") {
  auto g = make_grid();
  const auto zero = Profile::zero(g);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  const auto params = cubic_params(0.0);
  CHECK(code_of([&] { project_pohozaev(State(fixtures::gaussian(g, 1.0), zero), params); }) == ErrorCode::NoProjection);
  CHECK(code_of([&] { projected_energy(State(fixtures::gaussian(g, 1.0), zero), params); }) == ErrorCode::NoProjection);
  CHECK(code_of([&] { project_pohozaev(State(zero, zero), params); }) == ErrorCode::ZeroState);
  CHECK(code_of([&] { project_pohozaev(State(fixtures::gaussian(g, 3.0), zero), free_params(1.0)); }) ==
        ErrorCode::NoProjection);
}

TEST_CASE("projected energy is dilation invariant", "[energy]") {
  auto g = make_grid();
  const State s(fixtures::gaussian(g, 3.0), fixtures::gaussian(g, 2.0, 1.3));
  const auto params = cubic_params(0.8);
  const double E = projected_energy(s, params);
  for (double t : {0.5, 1.0, 2.0}) {
    const State d(dilate(s.u, t), dilate(s.v, t));
    CHECK(projected_energy(d, params) == Approx(E).epsilon(1e-3));
  }
}

TEST_CASE("scaling laws along the dilation ray", "[energy]") {
  auto g = make_grid();
  const State s(fixtures::gaussian(g, 2.5), fixtures::gaussian(g, 1.5, 0.8));
  const auto params = cubic_params(1.2);
  const auto p1 = energy_parts(s, params);
  for (double t : {0.6, 1.5}) {
    const auto pt = energy_parts(State(dilate(s.u, t), dilate(s.v, t)), params);
    CHECK(pt.K() == Approx(t * p1.K()).epsilon(1e-3));
    CHECK(pt.M() == Approx(t * t * t * p1.M()).epsilon(1e-3));
    CHECK(pt.P == Approx(t * t * t * p1.P).epsilon(1e-3));
  }
}

TEST_CASE("projected states stay away from the origin", "[energy]") {
  auto g = make_grid();
  std::mt19937_64 rng(17);
  double smallest = 1e300;
  for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (int k = 0; k < 4; ++k) {
      State s(fixtures::random_signed_profile(g, rng, 3.0), fixtures::random_signed_profile(g, rng, 3.0));
      const auto params = cubic_params(beta);
      while (!(energy_parts(s, params).W() > 0.0)) s = State(s.u.scaled(1.5), s.v.scaled(1.5));
      const auto rep = energy_report(project_pohozaev(s, params).state, params);
      smallest = std::min(smallest, rep.normH1_sq);
    }
  }
  INFO("empirical lower bound on ||(u,v)||^2 over the Pohozaev set: " << smallest);
  CHECK(smallest > 1e-2);
}
