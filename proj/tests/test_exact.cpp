#include <catch2/catch_amalgamated.hpp>

#include <covloc/exact.hpp>

#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace covloc;

namespace {
Instance generated_tiny(std::uint64_t seed, int n = 3, int T = 2, int S = 2) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.T = T;
  cfg.S = S;
  cfg.seed = seed;
  return generate(cfg);
}
}  // namespace

TEST_CASE("no coverage demand means no spending") {
  Instance inst = helpers::unit_instance(3, 2, 0, 0);
  inst.surplus_cost[0][0][0] = {0.0};
  const auto res = solve_exact(inst);
  CHECK(res.opt == Catch::Approx(0.0));
  CHECK(res.best.opens[0][0] == 0);
}

TEST_CASE("opening beats paying the shortage penalty") {
  // one location, threshold 1: open (3) against shortage (5)
  const Instance inst = helpers::unit_instance(2, 1, 1, 5);
  const auto res = solve_exact(inst);
  CHECK(res.opt == Catch::Approx(3.0));
  CHECK(res.best.opens[0][0] == 1);
}

TEST_CASE("exact optimum is independent of enumeration order") {
  const Instance inst = generated_tiny(42);
  const auto res = solve_exact(inst);
  const double forward = oracles::exact_opt(inst, false);
  const double backward = oracles::exact_opt(inst, true);
  CHECK(res.opt == Catch::Approx(forward).margin(1e-9));
  CHECK(forward == Catch::Approx(backward).margin(1e-9));
}

TEST_CASE("documented tiny instance solves against the oracle") {
  const Instance inst = helpers::tiny_2x2();
  const auto res = solve_exact(inst);
  CHECK(res.opt == Catch::Approx(oracles::exact_opt(inst)).margin(1e-9));
  CHECK(first_stage_violations(inst, res.best).empty());
  CHECK(evaluate_first_stage(inst, res.best).first == Catch::Approx(res.opt).margin(1e-9));
}

TEST_CASE("budget guard refuses instead of approximating") {
  GeneratorConfig cfg;
  cfg.n = 5;
  cfg.T = 3;
  cfg.S = 2;
  cfg.seed = 1;
  const Instance inst = generate(cfg);  // bound 3^30 candidates
  CHECK_THROWS_AS(solve_exact(inst), std::runtime_error);
  CHECK_NOTHROW(solve_exact(generated_tiny(2)));
}

TEST_CASE("single scenario collapses the information value") {
  const Instance inst = generated_tiny(14, 3, 2, 1);
  const auto full = solve_exact(inst);
  auto [ws, per_scenario] = wait_and_see(inst);
  REQUIRE(per_scenario.size() == 1);
  CHECK(ws == Catch::Approx(full.opt).margin(1e-9));
}

TEST_CASE("identical scenarios carry no information value") {
  Instance inst = generated_tiny(25, 3, 2, 2);
  inst.covers[1] = inst.covers[0];
  inst.threshold[1] = inst.threshold[0];
  inst.surplus_cost[1] = inst.surplus_cost[0];
  inst.shortage_cost[1] = inst.shortage_cost[0];
  REQUIRE(validate(inst).empty());
  const auto v = value_of_modeling(inst);
  CHECK(v.evpi == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("perfect information never hurts") {
  for (std::uint64_t seed : {5ull, 16ull, 27ull}) {
    const Instance inst = generated_tiny(seed);
    const auto full = solve_exact(inst);
    auto [ws, per_scenario] = wait_and_see(inst);
    CAPTURE(seed);
    CHECK(full.opt - ws >= -1e-9);  // evpi >= 0
    double expected_ws = 0;
    for (int s = 0; s < inst.num_scenarios; ++s) expected_ws += inst.prob[s] * per_scenario[s];
    CHECK(ws == Catch::Approx(expected_ws).margin(1e-9));
  }
}

TEST_CASE("a single period has no multi-period value") {
  const Instance inst = generated_tiny(31, 3, 1, 2);
  auto [one_ps, mps, vms] = static_counterpart(inst);
  CHECK(vms == Catch::Approx(0.0).margin(1e-9));
  CHECK(one_ps == Catch::Approx(mps).margin(1e-9));
}

TEST_CASE("static plans never beat the multi-period optimum") {
  for (std::uint64_t seed : {8ull, 19ull, 40ull}) {
    const Instance inst = generated_tiny(seed, 3, 2, 2);
    auto [one_ps, mps, vms] = static_counterpart(inst);
    CAPTURE(seed);
    CHECK(vms >= -1e-9);
    CHECK(one_ps == Catch::Approx(mps + vms).margin(1e-9));
    CHECK(mps == Catch::Approx(solve_exact(inst).opt).margin(1e-12));
  }
}

TEST_CASE("modeling measures serialize with the difference column") {
  const Instance inst = generated_tiny(50, 2, 2, 2);
  const auto v = value_of_modeling(inst);
  const json j = value_of_modeling_json(v);
  CHECK(j.at("evpi").get<double>() == Catch::Approx(v.sp - v.ws).margin(1e-12));
  CHECK(j.at("vms").get<double>() == Catch::Approx(v.one_ps - v.mps).margin(1e-12));
  CHECK(j.contains("sp_minus_mps"));
}
