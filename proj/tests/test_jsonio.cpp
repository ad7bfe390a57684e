#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natree/cps.hpp"
#include "natree/generate.hpp"
#include "natree/jsonio.hpp"

#include "support.hpp"

using namespace natree;
using testkit::flat2;

TEST_CASE("rational literals") {
  CHECK(parse_rat("1/3") == rat(1, 3));
  CHECK(parse_rat("-2/6") == rat(-1, 3));
  CHECK(parse_rat("7") == rat(7));
  CHECK(rat_str(rat(-1, 3)) == "-1/3");
  CHECK(rat_str(rat(4)) == "4");
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("a/3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/2/3"), std::invalid_argument);
}

TEST_CASE("instances round-trip byte for byte") {
  auto inst = flat2();
  inst.meta.mode = "hand";
  inst.meta.seed = 7;
  inst.meta.has_seed = true;
  auto doc = instance_to_json(inst);
  const std::string once = dump_json(doc);
  auto back = instance_from_json(Json::parse(once));
  CHECK(dump_json(instance_to_json(back)) == once);
  CHECK(back.d == inst.d);
  CHECK(back.tree.horizon == inst.tree.horizon);
  CHECK(back.tree.size() == inst.tree.size());
  CHECK(back.meta.seed == 7);
  CHECK(back.bidask[0].pi == inst.bidask[0].pi);
  CHECK(back.kernels[0] == inst.kernels[0]);
}

TEST_CASE("generated instances round-trip and stay valid") {
  GeneratorConfig cfg;
  cfg.mode = "random";
  cfg.d = 3;
  cfg.horizon = 2;
  cfg.branch_lo = 1;
  cfg.branch_hi = 3;
  cfg.kernels_hi = 3;
  cfg.seed = 31;
  auto inst = gen_instance(cfg);
  const std::string once = dump_json(instance_to_json(inst));
  auto back = instance_from_json(Json::parse(once));
  CHECK(validate_instance(back).ok());
  CHECK(dump_json(instance_to_json(back)) == once);
}

TEST_CASE("parse errors name the offending node") {
  auto inst = flat2();
  auto doc = instance_to_json(inst);
  doc["root"]["children"][1]["kernels"][0][0] = "not-a-number";
  try {
    instance_from_json(doc);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("node 1") != std::string::npos);
  }

  auto wrong_schema = instance_to_json(inst);
  wrong_schema["schema"] = "natree-instance/999";
  CHECK_THROWS_AS(instance_from_json(wrong_schema), ParseError);

  auto truncated = instance_to_json(inst);
  truncated["root"]["children"][0].erase("children");
  CHECK_THROWS_AS(instance_from_json(truncated), ParseError);
}

TEST_CASE("price systems, requests and certificates round-trip") {
  auto inst = flat2();
  ExtensionRequest req;
  req.time = 0;
  req.P = uniform_tree_measure(inst);
  req.Y[0] = {rat(1), rat(1)};
  auto ps = build_pce(inst, req);

  auto psj = price_system_to_json(inst, ps);
  auto ps2 = price_system_from_json(inst, psj);
  CHECK(ps2.start_time == ps.start_time);
  CHECK(ps2.q == ps.q);
  for (int v = 0; v < inst.tree.size(); ++v) {
    REQUIRE(ps2.z[v].has_value() == ps.z[v].has_value());
    if (ps.z[v]) CHECK(*ps2.z[v] == *ps.z[v]);
  }
  CHECK(dump_json(price_system_to_json(inst, ps2)) == dump_json(psj));

  auto reqj = request_to_json(inst, req);
  auto req2 = request_from_json(inst, reqj);
  CHECK(req2.time == req.time);
  CHECK(req2.P == req.P);
  CHECK(req2.Y == req.Y);

  ArbitrageCertificate cert;
  cert.time = 0;
  cert.node = 0;
  cert.zeta = {rat(2), rat(-1)};
  cert.separating_ray = {rat(1), rat(8)};
  Strategy strat;
  strat.xi[1] = {rat(-2), rat(1)};
  strat.xi[2] = {rat(-2), rat(1)};
  auto cj = certificate_to_json(inst, cert, strat);
  auto cert2 = certificate_from_json(inst, cj);
  auto strat2 = strategy_from_json(inst, cj);
  CHECK(cert2.node == 0);
  CHECK(cert2.zeta == cert.zeta);
  CHECK(cert2.separating_ray == cert.separating_ray);
  CHECK(strat2.xi == strat.xi);
}
