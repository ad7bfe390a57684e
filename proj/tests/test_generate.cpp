#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natree/generate.hpp"
#include "natree/jsonio.hpp"
#include "natree/na2.hpp"

using namespace natree;

TEST_CASE("identical configuration, identical document") {
  GeneratorConfig cfg;
  cfg.mode = "random";
  cfg.d = 3;
  cfg.horizon = 2;
  cfg.branch_lo = 1;
  cfg.branch_hi = 3;
  cfg.kernels_hi = 3;
  cfg.seed = 424242;
  auto a = gen_instance(cfg);
  auto b = gen_instance(cfg);
  CHECK(dump_json(instance_to_json(a)) == dump_json(instance_to_json(b)));

  cfg.seed = 424243;
  auto c = gen_instance(cfg);
  CHECK(dump_json(instance_to_json(a)) != dump_json(instance_to_json(c)));
}

TEST_CASE("generated instances validate") {
  GeneratorConfig cfg;
  cfg.branch_lo = 1;
  cfg.branch_hi = 3;
  cfg.kernels_lo = 1;
  cfg.kernels_hi = 3;
  for (const char* mode : {"random", "monotone", "planted-arbitrage"}) {
    cfg.mode = mode;
    for (int iter = 0; iter < 10; ++iter) {
      cfg.d = 2 + iter % 3;
      cfg.horizon = 1 + iter % 3;
      cfg.seed = 700 + iter;
      auto inst = gen_instance(cfg);
      CHECK(validate_instance(inst).ok());
      CHECK(inst.finalized);
    }
  }
}

TEST_CASE("monotone instances hold, planted instances fail") {
  GeneratorConfig cfg;
  cfg.branch_lo = 1;
  cfg.branch_hi = 3;
  cfg.kernels_lo = 1;
  cfg.kernels_hi = 3;
  for (int iter = 0; iter < 30; ++iter) {
    cfg.d = 2 + iter % 3;
    cfg.horizon = 1 + iter % 3;
    cfg.seed = 1000 + iter;
    cfg.mode = "monotone";
    CHECK(na2_global(gen_instance(cfg)).holds);
    cfg.mode = "planted-arbitrage";
    auto verdict = na2_global(gen_instance(cfg));
    CHECK(!verdict.holds);
    CHECK(!verdict.failing.empty());
  }
}

TEST_CASE("monotone mode dominates entrywise along every edge") {
  GeneratorConfig cfg;
  cfg.mode = "monotone";
  cfg.d = 3;
  cfg.horizon = 3;
  cfg.branch_lo = 1;
  cfg.branch_hi = 2;
  cfg.seed = 5;
  auto inst = gen_instance(cfg);
  for (int v = 1; v < inst.tree.size(); ++v) {
    const int p = inst.tree.nodes[v].parent;
    for (int i = 0; i < cfg.d; ++i)
      for (int j = 0; j < cfg.d; ++j) CHECK(inst.bidask[v].pi[i][j] >= inst.bidask[p].pi[i][j]);
  }
}

TEST_CASE("contradictory ranges are rejected") {
  GeneratorConfig cfg;
  cfg.branch_lo = 3;
  cfg.branch_hi = 1;
  CHECK_THROWS_AS(gen_instance(cfg), std::invalid_argument);
  GeneratorConfig cfg2;
  cfg2.mode = "nonsense";
  CHECK_THROWS_AS(gen_instance(cfg2), std::invalid_argument);
  GeneratorConfig cfg3;
  cfg3.cost_lo = rat(3);
  cfg3.cost_hi = rat(1);
  CHECK_THROWS_AS(gen_instance(cfg3), std::invalid_argument);
}

TEST_CASE("sampled matrices are frictionful and route-normalized") {
  Rng rng(77);
  GeneratorConfig cfg;
  cfg.cost_lo = rat(2, 3);
  cfg.cost_hi = rat(5, 2);
  // entries may exceed the top of the range only through the friction
  // fallback 2/pi, which stays below 2/cost_lo; the route closure can only
  // lower them, never below zero
  const Rat cap = std::max(cfg.cost_hi, Rat(2 / cfg.cost_lo));
  for (int iter = 0; iter < 50; ++iter) {
    auto pi = random_bidask(rng, 4, cfg);
    CHECK(efficient_friction(pi));
    CHECK(sgn(max_interior_margin(dual_cone_hrep(pi)).margin) > 0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        CHECK(sgn(pi.pi[i][j]) > 0);
        CHECK(pi.pi[i][j] <= cap);
        for (int k = 0; k < 4; ++k)
          if (k != i && k != j) CHECK(pi.pi[i][j] <= pi.pi[i][k] * pi.pi[k][j]);
      }
  }
}
