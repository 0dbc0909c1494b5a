#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "cnls/radial_grid.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cnls;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;
const double pi32 = std::pow(pi, 1.5);
}  // namespace

TEST_CASE("grid construction and weights", "[grid]") {
  const RadialGrid g(2.0, 2000);
  CHECK(g.r(0) == 0.0);
  CHECK(g.r(2000) == 2.0);
  CHECK(g.h() == Approx(1e-3));
  double sum = 0.0;
  for (double w : g.weights()) sum += w;
  const double ball = 4.0 / 3.0 * pi * 8.0;
  CHECK(std::fabs(sum / ball - 1.0) <= 2.0 * g.h() * g.h() / 4.0);
  CHECK_THROWS_AS(RadialGrid(2.0, 63), Error);
  CHECK_THROWS_AS(RadialGrid(-1.0, 100), Error);
}

TEST_CASE("integrate reproduces ball volume and Gaussian moments", "[grid]") {
  auto ball = make_grid(2.0, 2000);
  std::vector<double> ones(ball->size(), 1.0);
  CHECK(integrate(*ball, ones) == Approx(4.0 / 3.0 * pi * 8.0).epsilon(1e-6));

  auto g = make_grid(20.0, 4000);
  std::vector<double> s1(g->size()), s2(g->size()), s3(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    s1[i] = std::exp(-r * r);
    s2[i] = r * r * std::exp(-r * r);
    s3[i] = std::exp(-2.0 * r * r);
  }
  CHECK(integrate(*g, s1) == Approx(pi32).epsilon(1e-6));
  CHECK(integrate(*g, s2) == Approx(oracle::radial_integral([](double r) { return r * r * std::exp(-r * r); }, 20.0))
                                 .epsilon(1e-6));
  CHECK(integrate(*g, s2) == Approx(1.5 * pi32).epsilon(1e-6));
  CHECK(integrate(*g, s3) == Approx(std::pow(pi / 2.0, 1.5)).epsilon(1e-6));
}

TEST_CASE("integrate is linear and monotone", "[grid]") {
  auto g = make_grid(5.0, 500);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> a(g->size()), b(g->size()), c(g->size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = U(rng);
    b[i] = U(rng);
    c[i] = 2.0 * a[i] - 3.0 * b[i];
  }
  CHECK(integrate(*g, c) == Approx(2.0 * integrate(*g, a) - 3.0 * integrate(*g, b)).epsilon(1e-12));
  CHECK(integrate(*g, a) >= 0.0);
  CHECK_THROWS_AS(integrate(*g, std::vector<double>(10, 1.0)), Error);
}

TEST_CASE("profile invariants", "[grid]") {
  auto g = make_grid(5.0, 100);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(code_of([&] { Profile(g, std::vector<double>(50, 0.0)); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] { Profile(g, std::vector<double>(101, 1.0)); }) == ErrorCode::InvalidProfile);
  std::vector<double> bad(101, 0.0);
  bad[3] = std::nan("");
  CHECK(code_of([&] { Profile(g, bad); }) == ErrorCode::InvalidProfile);
  auto other = make_grid(5.0, 200);
  CHECK(code_of([&] { State(Profile::zero(g), Profile::zero(other)); }) == ErrorCode::GridMismatch);
}

TEST_CASE("central Laplacian", "[grid]") {
  auto g = make_grid(20.0, 4000);
  const double h = g->h();
  const auto gauss = fixtures::gaussian(g, 1.0);
  const auto lap = laplacian(gauss);
  double err = 0.0;
  for (std::size_t i = 0; g->r(i) <= 17.0; ++i) {
    const double r = g->r(i);
    err = std::max(err, std::fabs(lap[i] - (r * r - 3.0) * std::exp(-r * r / 2.0)));
  }
  CHECK(err < 5.0 * h * h);

  for (double x : laplacian(Profile::zero(g))) CHECK(x == 0.0);

  const double R = g->R();
  const auto quad = Profile::sample(g, [&](double r) { return 1.0 - r * r / (R * R); });
  const auto lq = laplacian(quad);
  double qerr = 0.0;
  for (int i = 0; i < g->N(); ++i) qerr = std::max(qerr, std::fabs(lq[i] + 6.0 / (R * R)));
  CHECK(qerr < 1e-10);

  const auto one = Profile::sample(g, [](double) { return 1.0; });
  const auto l1 = laplacian(one);
  for (int i = 0; i + 1 < g->N(); ++i) CHECK(std::fabs(l1[i]) < 1e-10);
}

TEST_CASE("compact Laplacian and kinetic energy are fourth order", "[grid]") {
  double prev = 0.0;
  for (int N : {1000, 2000, 4000}) {
    auto g = make_grid(20.0, N);
    const auto gauss = fixtures::gaussian(g, 1.0);
    const double err = std::fabs(kinetic(gauss) - 1.5 * pi32);
    if (prev > 0.0) CHECK(prev / err > 12.0);
    prev = err;
    const auto lap = compact_laplacian(gauss);
    double lerr = 0.0;
    for (int i = 0; g->r(i) <= 17.0; ++i) {
      const double r = g->r(i);
      lerr = std::max(lerr, std::fabs(lap[i] - (r * r - 3.0) * std::exp(-r * r / 2.0)));
    }
    CHECK(lerr < 5.0 * std::pow(g->h(), 3));
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("dilation", "[grid]") {
  auto g = make_grid(20.0, 4000);
  const auto u = fixtures::gaussian(g, 1.0);
  const auto same = dilate(u, 1.0);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(same[i] == u[i]);

  const auto u2 = dilate(u, 2.0);
  const auto sq = [](double x) { return x * x; };
  CHECK(fixtures::integral_of(u2, sq) == Approx(8.0 * fixtures::integral_of(u, sq)).epsilon(1e-4));
  CHECK(kinetic(u2) == Approx(2.0 * kinetic(u)).epsilon(1e-4));

  const auto ab = dilate(dilate(u, 1.3), 0.7);
  const auto direct = dilate(u, 0.91);
  double diff = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::fabs(ab[i] - direct[i]));
  CHECK(diff <= 2.0 * g->h());

  CHECK_THROWS_AS(dilate(u, 0.0), Error);
  CHECK_THROWS_AS(dilate(u, -1.0), Error);
  CHECK(dilate(u, 0.5)[g->N()] == 0.0);
}

TEST_CASE("rearrangement fixed point and mass transport", "[grid][rearrange]") {
  auto g = make_grid(20.0, 4000);
  const auto u = fixtures::gaussian(g, 2.0);
  const auto us = rearrange(u);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(us[i] == u[i]);

  const auto bump = Profile::sample(g, [](double r) { return std::exp(-std::pow((r - 5.0) / 0.7, 4)); });
  const auto bs = rearrange(bump);
  CHECK(bs[0] == Approx(1.0).epsilon(1e-9));
  const auto sq = [](double x) { return x * x; };
  CHECK(fixtures::integral_of(bs, sq) == Approx(fixtures::integral_of(bump, sq)).epsilon(1e-6));
  for (std::size_t i = 1; i < bs.size(); ++i) CHECK(bs[i] <= bs[i - 1]);

  // Negative input is rearranged through its absolute value.
  const auto neg = rearrange(bump.scaled(-1.0));
  for (std::size_t i = 0; i < bs.size(); ++i) CHECK(neg[i] == bs[i]);

  const auto twice = rearrange(bs);
  for (std::size_t i = 0; i < bs.size(); ++i) CHECK(twice[i] == bs[i]);
}

TEST_CASE("rearrangement preserves integrals and decreases kinetic energy", "[grid][rearrange]") {
  auto g = make_grid(20.0, 4000);
  std::mt19937_64 rng(7);
  const auto sq = [](double x) { return x * x; };
  const auto quart = [](double x) { return x * x * x * x; };
  const auto logF = [](double x) { return 0.5 * x * x * std::log1p(x * x); };
  for (int k = 0; k < 30; ++k) {
    const auto p = fixtures::random_bumpy_profile(g, rng, k);
    const auto q = rearrange(p);
    for (std::size_t i = 1; i < q.size(); ++i) REQUIRE(q[i] <= q[i - 1]);
    CHECK(fixtures::integral_of(q, sq) == Approx(fixtures::integral_of(p, sq)).epsilon(1e-6));
    CHECK(fixtures::integral_of(q, quart) == Approx(fixtures::integral_of(p, quart)).epsilon(1e-6));
    CHECK(fixtures::integral_of(q, logF) == Approx(fixtures::integral_of(p, logF)).epsilon(1e-6));
    CHECK(kinetic(q) <= kinetic(p) * (1.0 + 1e-8));
  }
}
