#include <doctest.h>

#include <random>

#include "pispace/generators.hpp"
#include "pispace/error.hpp"
#include "pispace/space.hpp"

using namespace pispace;

TEST_CASE("window enumeration") {
  std::vector<FinSeq> seen;
  for_each_node(Window{2, 2}, [&](const FinSeq& a) { seen.push_back(a); });
  CHECK(seen.size() == 7);
  CHECK(seen.front() == FinSeq{});
  CHECK(seen[1] == FinSeq{0});
  CHECK(seen[2] == FinSeq{0, 0});

  std::size_t count = 0;
  for_each_node(Window{3, 0}, [&](const FinSeq&) { ++count; });
  CHECK(count == 0);
  for_each_node(Window{0, 5}, [&](const FinSeq&) { ++count; });
  CHECK(count == 1);
}

TEST_CASE("finite topology validation") {
  CHECK_NOTHROW(FiniteSpaceModel::sierpinski());
  CHECK_THROWS_AS(FiniteSpaceModel({"a", "b"}, {PointSet{}, PointSet::of({0})}), ValidationError);
  CHECK_THROWS_AS(FiniteSpaceModel({"a", "a"}, {PointSet{}, PointSet::of({0, 1})}),
                  ValidationError);
  CHECK_THROWS_AS(FiniteSpaceModel({"a", "b", "c"}, {PointSet{}, PointSet::of({0}),
                                                     PointSet::of({1}), PointSet::of({0, 1, 2})}),
                  ValidationError);
  CHECK_THROWS_AS(FiniteSpaceModel({}, {}), ValidationError);
}

TEST_CASE("topology counts on small sets") {
  // brute-force count of families closed under ∪ and ∩, computed independently
  auto count_by_hand = [](std::size_t n) {
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::size_t count = 0;
    for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
      if (!(fam & 1U) || !((fam >> (subsets - 1)) & 1U)) continue;
      bool ok = true;
      for (std::uint64_t a = 0; a < subsets && ok; ++a) {
        for (std::uint64_t b = 0; b < subsets && ok; ++b) {
          if (((fam >> a) & 1U) && ((fam >> b) & 1U)) {
            ok = ((fam >> (a | b)) & 1U) && ((fam >> (a & b)) & 1U);
          }
        }
      }
      if (ok) ++count;
    }
    return count;
  };
  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(FiniteSpaceModel::all_topologies(n).size() == count_by_hand(n));
  }
  CHECK(FiniteSpaceModel::all_topologies(4).size() == 355);
  CHECK_THROWS_AS(FiniteSpaceModel::all_topologies(5), ValidationError);
}

TEST_CASE("finite space json") {
  auto j = nlohmann::json::parse(R"({"points": ["a", 7], "opens": [[], ["7"], ["a", 7]]})");
  auto s = FiniteSpaceModel::from_json(j);
  CHECK(s.point_count() == 2);
  CHECK(s.labels()[1] == "7");
  CHECK(s.is_open(PointSet::of({1})));
  CHECK_FALSE(s.is_open(PointSet::of({0})));
  auto back = FiniteSpaceModel::from_json(s.to_json());
  CHECK(back.opens() == s.opens());
  CHECK(s.parse_set(nlohmann::json::array({"a"})) == PointSet::of({0}));
  CHECK_THROWS_AS(s.parse_set(nlohmann::json::array({"zz"})), ValidationError);
  CHECK_THROWS_AS(FiniteSpaceModel::from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("finite pi-base cycles below the open") {
  auto s = FiniteSpaceModel::sierpinski();
  CHECK(s.pi_base(s.whole(), 0) == s.whole());
  CHECK(s.pi_base(s.whole(), 1) == PointSet::of({1}));
  CHECK(s.pi_base(s.whole(), 2) == s.whole());
  CHECK(s.pi_base(PointSet::of({1}), 5) == PointSet::of({1}));
  CHECK_THROWS_AS(s.pi_base(PointSet{}, 0), EmptySetError);

  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& t : FiniteSpaceModel::all_topologies(n)) {
      for (auto o : t.opens()) {
        if (o.empty()) continue;
        const auto below = t.opens_below(o);
        CHECK(t.pi_base(o, 0) == o);
        for (Nat m = 0; m < 2 * below.size(); ++m) {
          auto w = t.pi_base(o, m);
          CHECK(t.is_open(w));
          CHECK_FALSE(w.empty());
          CHECK(t.subset(w, o));
        }
        // every nonempty open below o appears in one cycle
        for (auto u : t.opens()) {
          if (u.empty() || !t.subset(u, o)) continue;
          bool found = false;
          for (Nat m = 0; m < below.size(); ++m) found = found || t.pi_base(o, m) == u;
          CHECK(found);
        }
      }
    }
  }
}

TEST_CASE("baire pi-base") {
  BaireSpaceModel b;
  auto o = parse_expr("S(0) | S(1,2)");
  CHECK(equal(b.pi_base(o, 0), o));
  for (Nat m = 1; m < 40; ++m) {
    auto w = b.pi_base(o, m);
    REQUIRE(as_single_cylinder(w));
    CHECK(subset(w, o));
    CHECK_FALSE(equal(w, o));
    CHECK_FALSE(is_empty(w));
  }
  CHECK_THROWS_AS(b.pi_base(CylExpr::empty(), 0), EmptySetError);
  CHECK_THROWS_AS(b.pi_base(parse_expr("S(1) & S(2)"), 3), EmptySetError);
}

TEST_CASE("baire pi-base reaches below every sub-cylinder") {
  // property: for random nonempty O and every cylinder S_c ⊆ O, some element
  // of the enumeration lies inside S_c
  std::mt19937_64 rng(17);
  BaireSpaceModel b;
  int tested = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto o = gen::random_expr(rng, 3, 2, 3);
    if (is_empty(o)) continue;
    auto c = witness_cylinder(o);
    REQUIRE(c);
    auto target = CylExpr::atom(c->append(1));
    bool hit = false;
    for (Nat m = 0; m < 4000 && !hit; ++m) hit = subset(b.pi_base(o, m), target);
    CHECK(hit);
    ++tested;
  }
  CHECK(tested > 20);
}
