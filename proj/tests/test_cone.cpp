#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natree/cone.hpp"
#include "natree/generate.hpp"

#include <algorithm>

using namespace natree;

namespace {

BidAskMatrix two_asset(const Rat& p12, const Rat& p21) {
  BidAskMatrix m = BidAskMatrix::uniform(2, Rat(1));
  m.pi[0][1] = p12;
  m.pi[1][0] = p21;
  return m;
}

// Independent ray oracle: every (d-1)-subset of normals with a 1-dimensional
// kernel contributes the kernel direction (or its negative) when it satisfies
// all rows. Valid for pointed full-dimensional cones at small d.
std::vector<RatVec> rays_by_subset_enumeration(const PolyCone& cone) {
  const auto& normals = *cone.normals;
  const int d = cone.dim;
  std::vector<RatVec> found;
  std::vector<int> pick(d - 1);
  auto consider = [&](const RatVec& v) {
    for (const auto& n : normals)
      if (sgn(dot(n, v)) < 0) return;
    RatVec u = unit_leading(v);
    for (const auto& seen : found)
      if (lex_compare(seen, u) == 0) return;
    found.push_back(std::move(u));
  };
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == d - 1) {
      std::vector<RatVec> rows;
      for (int k : pick) rows.push_back(normals[k]);
      if (rank_of(rows, d) != d - 1) return;
      auto v = null_vector(rows, d);
      REQUIRE(v.has_value());
      consider(*v);
      consider(scaled(*v, Rat(-1)));
      return;
    }
    for (int i = start; i < static_cast<int>(normals.size()); ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  std::sort(found.begin(), found.end(),
            [](const RatVec& a, const RatVec& b) { return lex_compare(a, b) < 0; });
  return found;
}

GeneratorConfig sampling_cfg() {
  GeneratorConfig cfg;
  cfg.cost_lo = rat(1, 2);
  cfg.cost_hi = rat(3);
  cfg.den_max = 4;
  return cfg;
}

}  // namespace

TEST_CASE("solvency cone generators follow the exchange-rate matrix") {
  auto k2 = solvency_cone(two_asset(rat(2), rat(2)));
  REQUIRE(k2.has_vrep());
  std::vector<RatVec> expect = {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(2), rat(-1)}, {rat(-1), rat(2)}};
  CHECK(*k2.generators == expect);

  auto k32 = solvency_cone(two_asset(rat(3), rat(2)));
  std::vector<RatVec> expect32 = {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(3), rat(-1)}, {rat(-1), rat(2)}};
  CHECK(*k32.generators == expect32);

  auto k3 = solvency_cone(BidAskMatrix::uniform(3, rat(2)));
  REQUIRE(k3.generators->size() == 9);  // 3 basis vectors + 6 exchange generators
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      RatVec g = zeros(3);
      g[i] = rat(2);
      g[j] = rat(-1);
      CHECK(std::count_if(k3.generators->begin(), k3.generators->end(),
                          [&](const RatVec& x) { return lex_compare(x, g) == 0; }) == 1);
    }
}

TEST_CASE("dual cone H-rows") {
  auto ks = dual_cone_hrep(two_asset(rat(2), rat(2)));
  REQUIRE(ks.has_hrep());
  std::vector<RatVec> expect = {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(2), rat(-1)}, {rat(-1), rat(2)}};
  CHECK(*ks.normals == expect);

  // pi12 * pi21 = 1 degenerates the dual to the line y2 = y1
  auto flat = dual_cone_hrep(two_asset(rat(1), rat(1)));
  auto m = max_interior_margin(flat);
  CHECK(m.margin == 0);

  auto ks3 = dual_cone_hrep(BidAskMatrix::uniform(3, rat(2)));
  CHECK(ks3.normals->size() == 9);  // 3 sign rows + 6 spread rows
}

TEST_CASE("extreme rays: orthant and the two-asset dual") {
  auto orthant = PolyCone::from_normals(2, {{rat(1), rat(0)}, {rat(0), rat(1)}});
  auto rays = extreme_rays(orthant);
  CHECK(rays == std::vector<RatVec>{{rat(0), rat(1)}, {rat(1), rat(0)}});

  auto ks = dual_cone_hrep(two_asset(rat(2), rat(2)));
  auto dual_rays = extreme_rays(ks);
  // frozen from the subset-enumeration oracle: rays through (1,2) and (2,1)
  CHECK(rays_by_subset_enumeration(ks) == std::vector<RatVec>{{rat(1), rat(1, 2)}, {rat(1), rat(2)}});
  CHECK(dual_rays == std::vector<RatVec>{{rat(1), rat(1, 2)}, {rat(1), rat(2)}});

  // double dualization: K as cut out by its dual rays has rays through the
  // original generators (2,-1) and (-1,2); the basis vectors are not extreme
  auto k = PolyCone::from_normals(2, dual_rays);
  auto k_rays = extreme_rays(k);
  CHECK(k_rays == std::vector<RatVec>{{rat(-1), rat(2)}, {rat(1), rat(-1, 2)}});
}

TEST_CASE("non-pointed input is rejected with a witness line") {
  auto half = PolyCone::from_normals(2, {{rat(1), rat(0)}});
  CHECK_THROWS_AS(extreme_rays(half), NonPointedCone);
  try {
    extreme_rays(half);
  } catch (const NonPointedCone& e) {
    CHECK(sgn(dot({rat(1), rat(0)}, e.line)) == 0);
    CHECK(!is_zero_vec(e.line));
  }
}

TEST_CASE("membership by generators and by rows") {
  auto pi = two_asset(rat(2), rat(2));
  auto k = solvency_cone(pi);
  CHECK(member_cone({rat(1), rat(1)}, k));
  CHECK(member_cone({rat(2), rat(-1)}, k));
  CHECK(!member_cone({rat(3), rat(-2)}, k));  // <(1,2),(3,-2)> = -1

  auto with_rows = k;
  with_rows.normals = extreme_rays(dual_cone_hrep(pi));
  CHECK(member_cone({rat(1), rat(1)}, with_rows));
  CHECK(member_cone({rat(2), rat(-1)}, with_rows));
  CHECK(!member_cone({rat(3), rat(-2)}, with_rows));
  CHECK_THROWS_AS(member_cone({rat(1)}, k), std::invalid_argument);
}

TEST_CASE("interior margins after 1-norm scaling") {
  auto ks = dual_cone_hrep(two_asset(rat(2), rat(2)));
  CHECK(interior_margin({rat(1), rat(1)}, ks) == rat(1, 2));
  CHECK(interior_margin({rat(1), rat(2)}, ks) == 0);
  CHECK(interior_margin({rat(1), rat(0)}, ks) == rat(-1));
  CHECK_THROWS_AS(interior_margin({rat(0), rat(0)}, ks), std::invalid_argument);
}

TEST_CASE("efficient friction versus the margin program") {
  CHECK(efficient_friction(two_asset(rat(2), rat(2))));
  CHECK(!efficient_friction(two_asset(rat(2), rat(1, 2))));

  BidAskMatrix m = BidAskMatrix::uniform(3, rat(2));
  m.pi[0][1] = rat(2);
  m.pi[1][0] = rat(1, 2);
  CHECK(!efficient_friction(m));
  CHECK(max_interior_margin(dual_cone_hrep(m)).margin == 0);
}

TEST_CASE("round-trip bound and the ratio inequality on extreme rays") {
  auto pi = two_asset(rat(2), rat(2));
  CHECK(roundtrip_bound(pi) == 4);
  CHECK(roundtrip_bound(two_asset(rat(3), rat(2))) == 6);

  const Rat c = roundtrip_bound(pi);
  auto rays = extreme_rays(dual_cone_hrep(pi));
  for (const auto& x : rays)
    for (const auto& y : rays)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(x[j] * y[i] <= c * x[i] * y[j]);
  // the worked pair holds with equality
  CHECK(rat(2) * rat(2) == c * rat(1) * rat(1));
}

TEST_CASE("frictionless decomposition") {
  auto pi = two_asset(rat(2), rat(2));
  auto f = frictionless_decompose(pi, {rat(1), rat(1)});
  CHECK(f.lambda[0][1] == 1);
  CHECK(f.lambda[1][0] == 1);

  auto g = frictionless_decompose(pi, {rat(1), rat(2)});
  CHECK(g.lambda[0][1] == 0);
  CHECK(g.lambda[1][0] == 3);

  CHECK_THROWS_AS(frictionless_decompose(pi, {rat(1), rat(3)}), std::invalid_argument);
  CHECK_THROWS_AS(frictionless_decompose(pi, {rat(0), rat(1)}), std::invalid_argument);

  // 1 + lambda stays below the round-trip bound
  const Rat c = roundtrip_bound(pi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (i != j) CHECK(1 + g.lambda[i][j] <= c);
}

TEST_CASE("interior point selection") {
  auto ks = dual_cone_hrep(two_asset(rat(2), rat(2)));
  auto y = pick_interior_point(ks);
  CHECK(y == RatVec{rat(1), rat(1)});  // symmetric optimum, scaled to first coordinate 1
  CHECK(sgn(interior_margin(y, ks)) > 0);

  auto orthant = PolyCone::from_normals(2, {{rat(1), rat(0)}, {rat(0), rat(1)}});
  CHECK(pick_interior_point(orthant) == RatVec{rat(1), rat(1)});

  auto flat = dual_cone_hrep(two_asset(rat(2), rat(1, 2)));
  CHECK_THROWS_AS(pick_interior_point(flat), EmptyInterior);
  try {
    pick_interior_point(flat);
  } catch (const EmptyInterior& e) {
    CHECK(e.margin == 0);
  }
}

TEST_CASE("intersection concatenates rows") {
  auto k2 = PolyCone::from_normals(2, extreme_rays(dual_cone_hrep(two_asset(rat(2), rat(2)))));
  auto k3 = PolyCone::from_normals(2, extreme_rays(dual_cone_hrep(two_asset(rat(3), rat(3)))));
  auto only = cone_intersection({k2});
  CHECK(*only.normals == *k2.normals);

  // K(3) is contained in K(2), so the intersection is K(3)
  auto both = cone_intersection({k2, k3});
  CHECK(extreme_rays(both) == extreme_rays(k3));

  // intersecting with the orthant gives the orthant back
  auto orthant = PolyCone::from_normals(2, {{rat(1), rat(0)}, {rat(0), rat(1)}});
  auto with_orthant = cone_intersection({k2, orthant});
  CHECK(extreme_rays(with_orthant) == extreme_rays(orthant));

  CHECK_THROWS_AS(cone_intersection({}), std::invalid_argument);
}

TEST_CASE("duality involution on random matrices") {
  Rng rng(31337);
  auto cfg = sampling_cfg();
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const int d = 2 + static_cast<int>(rng.below(3));
    BidAskMatrix pi = random_bidask(rng, d, cfg);
    auto gens = *solvency_cone(pi).generators;
    auto dual = dual_cone_hrep(pi);
    auto dual_rays = extreme_rays(dual);

    // every dual ray is nonnegative against every generator and tight
    // against at least one (it sits on some facet of the solvency cone);
    // the basis vectors themselves are strictly interior, never tight
    for (const auto& r : dual_rays) {
      bool tight = false;
      for (const auto& g : gens) {
        const int s = sgn(dot(r, g));
        CHECK(s >= 0);
        if (s == 0) tight = true;
      }
      CHECK(tight);
      ++checked;
    }
    for (int i = 0; i < d; ++i)
      for (const auto& r : dual_rays) CHECK(sgn(r[i]) > 0);

    // mutual membership: K cut out by the dual rays equals the conic hull
    auto k_rows = PolyCone::from_normals(d, dual_rays);
    auto k_rays = extreme_rays(k_rows);
    auto gen_cone = PolyCone::from_generators(d, gens);
    for (const auto& r : k_rays) CHECK(member_cone(r, gen_cone));
    for (const auto& g : gens) CHECK(member_cone(g, k_rows));

    // efficient friction iff strictly positive maximal margin
    CHECK(efficient_friction(pi) == (sgn(max_interior_margin(dual).margin) > 0));

    // dual rays are strictly positive
    for (const auto& r : dual_rays)
      for (const auto& x : r) CHECK(sgn(x) > 0);

    // ratio bound with the computed round-trip constant on all ray pairs
    const Rat c = roundtrip_bound(pi);
    for (const auto& x : dual_rays)
      for (const auto& y : dual_rays)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) CHECK(x[j] * y[i] <= c * x[i] * y[j]);
  }
  CHECK(checked > 200);
}

TEST_CASE("ray oracle matches double description on random duals") {
  Rng rng(555);
  auto cfg = sampling_cfg();
  for (int iter = 0; iter < 60; ++iter) {
    const int d = 2 + static_cast<int>(rng.below(2));
    BidAskMatrix pi = random_bidask(rng, d, cfg);
    auto dual = dual_cone_hrep(pi);
    CHECK(extreme_rays(dual) == rays_by_subset_enumeration(dual));
  }
  // four assets: 16 rows, subsets of size 3
  for (int iter = 0; iter < 12; ++iter) {
    BidAskMatrix pi = random_bidask(rng, 4, cfg);
    auto dual = dual_cone_hrep(pi);
    CHECK(extreme_rays(dual) == rays_by_subset_enumeration(dual));
  }
}

TEST_CASE("general generator cones are vetted before use") {
  // a bid-ask cone qualifies
  auto good = solvency_cone(two_asset(rat(2), rat(3)));
  CHECK(solvency_cone_defects(good).empty());

  // a hand-made wider cone still qualifies
  auto custom = PolyCone::from_generators(
      2, {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(3), rat(-2)}, {rat(-1), rat(4)}});
  CHECK(solvency_cone_defects(custom).empty());

  // missing the orthant
  auto narrow = PolyCone::from_generators(2, {{rat(1), rat(0)}, {rat(1), rat(1)}});
  auto defects = solvency_cone_defects(narrow);
  REQUIRE(!defects.empty());
  CHECK(defects.front().find("not solvent") != std::string::npos);

  // contains a line: the dual degenerates
  auto pumped = PolyCone::from_generators(
      2, {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(2), rat(-1)}, {rat(-2), rat(1)}});
  CHECK(!solvency_cone_defects(pumped).empty());

  // does not span the space
  auto thin = PolyCone::from_generators(2, {{rat(1), rat(0)}});
  CHECK(!solvency_cone_defects(thin).empty());
}
