#include <catch2/catch_amalgamated.hpp>

#include <covloc/instance.hpp>
#include <covloc/lp.hpp>

#include "oracles.hpp"

using namespace covloc;

TEST_CASE("one-variable lower-bounded minimum") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.rows = {{1.0}};
  lp.senses = {RowSense::ge};
  lp.rhs = {1.0};
  lp.lower = {0.0};
  lp.upper = {2.0};
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.x[0] == Catch::Approx(1.0));
  CHECK(sol.objective == Catch::Approx(1.0));
}

TEST_CASE("face of optima reports the right value") {
  LinearProgram lp;
  lp.objective = {-1.0, -1.0};
  lp.rows = {{1.0, 1.0}};
  lp.senses = {RowSense::le};
  lp.rhs = {1.0};
  lp.lower = {0.0, 0.0};
  lp.upper = {1.0, 1.0};
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpSolution::Status::optimal);
  CHECK(sol.objective == Catch::Approx(-1.0));
  CHECK(sol.x[0] + sol.x[1] == Catch::Approx(1.0));
}

TEST_CASE("infeasible boxes are detected") {
  LinearProgram lp;
  lp.objective = {0.0};
  lp.rows = {{1.0}};
  lp.senses = {RowSense::ge};
  lp.rhs = {2.0};
  lp.lower = {0.0};
  lp.upper = {1.0};
  CHECK(solve_lp(lp).status == LpSolution::Status::infeasible);
}

TEST_CASE("iteration cap reports instead of looping") {
  LinearProgram lp;
  lp.objective = {-1.0, -2.0, 1.0};
  lp.rows = {{1.0, 1.0, -1.0}, {1.0, -1.0, 2.0}};
  lp.senses = {RowSense::le, RowSense::ge};
  lp.rhs = {1.0, -0.5};
  lp.lower = {0.0, 0.0, 0.0};
  lp.upper = {2.0, 2.0, 2.0};
  CHECK(solve_lp(lp, 1).status == LpSolution::Status::iteration_limit);
}

TEST_CASE("random boxed LPs match the vertex-enumeration oracle") {
  Rng rng(2024);
  int feasible_seen = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int n = 2 + rng.uniform_int(0, 4);
    const int m = 1 + rng.uniform_int(0, 3);
    LinearProgram lp;
    lp.objective.resize(n);
    lp.lower.resize(n);
    lp.upper.resize(n);
    for (int j = 0; j < n; ++j) {
      lp.objective[j] = rng.uniform(-5, 5);
      const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
      lp.lower[j] = std::min(a, b);
      lp.upper[j] = std::max(a, b);
    }
    lp.rows.assign(m, std::vector<double>(n));
    lp.senses.resize(m);
    lp.rhs.resize(m);
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j)
        lp.rows[r][j] = rng.uniform_int(0, 2) == 0 ? 0.0 : rng.uniform(-2, 2);
      const int s = rng.uniform_int(0, 5);
      lp.senses[r] = s >= 4 ? RowSense::eq : (s % 2 ? RowSense::ge : RowSense::le);
      lp.rhs[r] = rng.uniform(-4, 4);
    }
    const auto sol = solve_lp(lp);
    const auto want = oracles::boxed_lp_min(lp);
    CAPTURE(trial);
    if (!want) {
      CHECK(sol.status == LpSolution::Status::infeasible);
      continue;
    }
    ++feasible_seen;
    REQUIRE(sol.status == LpSolution::Status::optimal);
    const auto [row_viol, bound_viol] = lp_residuals(lp, sol.x);
    CHECK(row_viol <= 1e-7);
    CHECK(bound_viol <= 1e-9);
    // equality with the oracle subsumes the weak-duality sanity bound
    CHECK(sol.objective == Catch::Approx(*want).margin(1e-6).epsilon(1e-6));
    CHECK(sol.objective >= *want - 1e-6);
  }
  CHECK(feasible_seen > 50);
}

TEST_CASE("identical input gives an identical pivot path") {
  Rng rng(5);
  LinearProgram lp;
  const int n = 6, m = 4;
  lp.objective.resize(n);
  lp.lower.assign(n, 0.0);
  lp.upper.assign(n, 3.0);
  for (int j = 0; j < n; ++j) lp.objective[j] = rng.uniform(-2, 2);
  lp.rows.assign(m, std::vector<double>(n));
  lp.senses.assign(m, RowSense::le);
  lp.rhs.assign(m, 4.0);
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < n; ++j) lp.rows[r][j] = rng.uniform(-1, 2);
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  REQUIRE(a.status == LpSolution::Status::optimal);
  CHECK(a.iterations == b.iterations);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
}

TEST_CASE("interval-matrix systems return integral vertices") {
  // consecutive-ones constraint matrices are totally unimodular
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + rng.uniform_int(0, 3);
    const int m = 3 + rng.uniform_int(0, 2);
    LinearProgram lp;
    lp.objective.resize(n);
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, (double)rng.uniform_int(1, 3));
    for (int j = 0; j < n; ++j) lp.objective[j] = rng.uniform_int(-6, 6);
    lp.rows.assign(m, std::vector<double>(n, 0.0));
    lp.senses.assign(m, RowSense::le);
    lp.rhs.resize(m);
    for (int r = 0; r < m; ++r) {
      const int lo = rng.uniform_int(0, n - 1);
      const int hi = rng.uniform_int(lo, n - 1);
      for (int j = lo; j <= hi; ++j) lp.rows[r][j] = 1.0;
      lp.rhs[r] = rng.uniform_int(0, 4);
    }
    const auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpSolution::Status::optimal);
    for (double xv : sol.x) {
      CAPTURE(trial, xv);
      CHECK(std::abs(xv - std::round(xv)) <= 1e-7);
    }
  }
}
