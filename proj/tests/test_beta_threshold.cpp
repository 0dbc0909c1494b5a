#include <catch_amalgamated.hpp>

#include <cmath>

#include "cnls/beta_threshold.hpp"

using namespace cnls;
using Catch::Approx;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

struct Setup {
  GridPtr grid;
  EnergyParams params{Nonlinearity::cubic(), Nonlinearity::cubic(), 0.0};
  ScalarBaselines base;
  explicit Setup(int N) : grid(make_grid(20.0, N)), base(compute_baselines(params, grid)) {}
  EnergyParams at(double beta) const {
    auto p = params;
    p.beta = beta;
    return p;
  }
};

const Setup& fine() {
  static const Setup s(4000);
  return s;
}

const Setup& coarse() {
  static const Setup s(1000);
  return s;
}

}  // namespace

TEST_CASE("energy comparison for the symmetric cubic pair", "[threshold]") {
  const auto& s = fine();
  const double I = s.base.u0.action;
  // For the pair (w, w) the projected energy is 2 I / sqrt(1 + 2 beta).
  for (double beta : {0.01, 0.5, 1.5, 2.0, 10.0}) {
    const auto cmp = compare_energies(s.at(beta), s.base.u0, s.base.v0);
    CHECK(cmp.rhs == I);
    CHECK(cmp.lhs == Approx(2.0 * I / std::sqrt(1.0 + 2.0 * beta)).epsilon(1e-6));
  }
  CHECK(compare_energies(s.at(2.0), s.base.u0, s.base.v0).beats);
  CHECK_FALSE(compare_energies(s.at(0.01), s.base.u0, s.base.v0).beats);
  CHECK(compare_energies(s.at(1e6), s.base.u0, s.base.v0).lhs < 1e-2 * I);
  CHECK(code_of([&] { compare_energies(s.at(0.0), s.base.u0, s.base.v0); }) == ErrorCode::NegativeBeta);
}

TEST_CASE("comparison bound decreases strictly in beta", "[threshold]") {
  const auto& s = fine();
  double prev = 1e300;
  for (double beta = 0.05; beta < 20.0; beta *= 1.3) {
    const double lhs = compare_energies(s.at(beta), s.base.u0, s.base.v0).lhs;
    CHECK(lhs < prev);
    prev = lhs;
  }
}

TEST_CASE("scalar baselines do not depend on beta", "[threshold]") {
  const auto& s = coarse();
  const auto a = compute_baselines(s.at(0.3), s.grid);
  const auto b = compute_baselines(s.at(7.0), s.grid);
  CHECK(a.u0.action == Approx(b.u0.action).epsilon(1e-12));
  CHECK(a.v0.action == Approx(b.v0.action).epsilon(1e-12));
}

TEST_CASE("empty sweep", "[threshold]") {
  const auto& s = coarse();
  const auto res = sweep(s.params, {}, s.grid);
  CHECK(res.rows.empty());
  CHECK_FALSE(res.beta0_bracket);
  CHECK(code_of([&] { sweep(s.params, {2.0, 1.0}, s.grid, SolveConfig{}, s.base); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cubic sweep brackets the transition at beta = 1", "[threshold][slow]") {
  const auto& s = fine();
  const std::vector<double> betas{0.1, 0.5, 0.9, 1.1, 2.0, 5.0};
  const auto res = sweep(s.params, betas, s.grid, SolveConfig{}, s.base);
  REQUIRE(res.rows.size() == betas.size());
  bool seen_vector = false;
  for (const auto& row : res.rows) {
    INFO("beta=" << row.beta);
    REQUIRE(row.ok);
    CHECK(row.m <= row.lhs_bound + 1e-9);
    CHECK(row.vector_beats_scalar == (row.m < row.scalar_min - 1e-9));
    if (seen_vector) CHECK(row.kind == Kind::vector);
    seen_vector = seen_vector || row.kind == Kind::vector;
  }
  REQUIRE(res.beta0_bracket);
  CHECK(res.beta0_bracket->first >= 0.9);
  CHECK(res.beta0_bracket->second <= 1.1);
}

TEST_CASE("sweep isolates failing rows", "[threshold]") {
  const auto& s = coarse();
  const auto res = sweep(s.params, {-1.0, 2.0}, s.grid, SolveConfig{}, s.base);
  REQUIRE(res.rows.size() == 2);
  CHECK_FALSE(res.rows[0].ok);
  CHECK(res.rows[0].error.find("NegativeBeta") != std::string::npos);
  CHECK(res.rows[1].ok);
  CHECK(res.rows[1].kind == Kind::vector);
}

TEST_CASE("threshold bisection", "[threshold][slow]") {
  const auto& s = coarse();
  CHECK(bisect_beta0(s.params, {0.9, 1.1}, 1.0, s.grid, SolveConfig{}, s.base) == Approx(1.0).epsilon(1e-15));
  CHECK(code_of([&] { bisect_beta0(s.params, {2.0, 5.0}, 0.1, s.grid, SolveConfig{}, s.base); }) ==
        ErrorCode::InvalidBracket);
  CHECK(code_of([&] { bisect_beta0(s.params, {1.1, 0.9}, 0.1, s.grid, SolveConfig{}, s.base); }) ==
        ErrorCode::InvalidBracket);
  const double b0 = bisect_beta0(s.params, {0.9, 1.1}, 1e-2, s.grid, SolveConfig{}, s.base);
  CHECK(b0 == Approx(1.0).margin(1e-2));
}
