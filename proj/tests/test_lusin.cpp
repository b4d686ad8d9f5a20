#include <doctest.h>

#include <set>
#include <sstream>

#include "pispace/error.hpp"
#include "pispace/lusin.hpp"

using namespace pispace;

TEST_CASE("base enumerations") {
  auto std_input = LusinInput::standard();
  CHECK(equal(std_input.base(1), CylExpr::full()));
  CHECK(equal(std_input.base(3), CylExpr::atom({0})));
  CHECK(equal(std_input.base(2 * diagonal::finseq_index({2, 1}) + 1), CylExpr::atom({2, 1})));
  CHECK_THROWS_AS(std_input.base(2), RangeError);

  std::istringstream text("S(0,1)\n\nS(2) | S(3)\n");
  auto custom = LusinInput::from_stream(text);
  CHECK(equal(custom.base(1), CylExpr::atom({0, 1})));
  CHECK(equal(custom.base(3), parse_expr("S(2) | S(3)")));
  CHECK(equal(custom.base(5), CylExpr::atom({0, 1})));

  std::istringstream broken("S(0,\n");
  CHECK_THROWS_AS(LusinInput::from_stream(broken), ParseError);
  std::istringstream blank("\n  \n");
  CHECK_THROWS_AS(LusinInput::from_stream(blank), ValidationError);
}

TEST_CASE("even step stems are injective and cover the node") {
  auto ac = minimal_antichain(parse_expr("S(0) | S(2,1)"));
  std::set<FinSeq> seen;
  for (Nat n = 0; n < 200; ++n) {
    auto d = even_step_stem(ac, 2, n);
    CHECK(seen.insert(d).second);
    bool under = false;
    for (const auto& c : ac.members) under = under || is_prefix(c, d);
    CHECK(under);
    CHECK(d.size() >= 3);
  }
  // every c⌢d with small d shows up early enough
  for (const auto& c : ac.members) {
    for (Nat t = 0; t < 4; ++t) {
      CHECK(seen.contains(concat(c, diagonal::tuple(t, 3))));
    }
  }

  auto infinite = minimal_antichain(parse_expr("S() \\ S(0)"));
  REQUIRE_FALSE(infinite.finite());
  std::set<FinSeq> more;
  for (Nat n = 0; n < 300; ++n) CHECK(more.insert(even_step_stem(infinite, 0, n)).second);
}

TEST_CASE("root and first even step") {
  auto v = build_lusin(LusinInput::standard());
  CHECK(equal(v.node({}), CylExpr::full()));
  // V_⟨⟩ = Full has antichain {ε}; children enumerate S_d, d ∈ ω^1, injectively
  for (Nat n = 0; n < 10; ++n) CHECK(equal(v.node({n}), CylExpr::atom({n})));
}

TEST_CASE("odd step carves a strict witness inside the base set") {
  auto input = LusinInput::from_lines({"S(0,1)"});
  auto v = build_lusin(input);
  REQUIRE(equal(v.node({0}), CylExpr::atom({0})));
  const auto bk = CylExpr::atom({0, 1});

  // replay of the two assignments with c recovered from child 1
  auto first = as_single_cylinder(v.node({0, 1}));
  REQUIRE(first);
  const auto c = first->parent();
  CHECK(subset(CylExpr::atom(c), bk));
  CHECK_FALSE(equal(CylExpr::atom(c), bk));
  CHECK(equal(v.node({0, 0}), CylExpr::atom({0}) - CylExpr::atom(c)));
  CHECK(equal(v.node({0, 1}), CylExpr::atom(c.append(0))));
  CHECK(equal(v.node({0, 4}), CylExpr::atom(c.append(3))));
  CHECK_FALSE(is_empty(v.node({0, 0})));

  // a node that misses the base set splits as in the even step
  CHECK(is_empty(v.node({3}) & bk));
  CHECK(equal(v.node({3, 0}), CylExpr::atom({3, 0, 0})));
}

TEST_CASE("conditions hold on the standard enumeration") {
  auto input = LusinInput::standard();
  auto v = build_lusin(input);
  auto r = lusin_conditions_check(v, input, Window{3, 4});
  CHECK(r.passed());
  CHECK(r.count(Status::Verified) > 0);

  auto again = lusin_conditions_check(build_lusin(LusinInput::standard()), input, Window{3, 4});
  CHECK(r.to_json() == again.to_json());
}

TEST_CASE("conditions flag an odd node that is not one cylinder") {
  auto input = LusinInput::standard();
  auto good = build_lusin(input);
  Scheme<BaireSpaceModel> bad(good.space_ptr(), [good](const FinSeq& a) {
    if (a == FinSeq{1}) return parse_expr("S(1,0) | S(1,1)");
    return good.node(a);
  });
  auto r = lusin_conditions_check(bad, input, Window{1, 3});
  bool flagged = false;
  for (const auto& f : r.findings) {
    flagged = flagged || (f.check == "single-cylinder" && f.status == Status::Violated);
  }
  CHECK(flagged);
  CHECK(lusin_conditions_check(good, input, Window{4, 0}).findings.empty());
}

TEST_CASE("precision grows along lusin branches") {
  auto v = build_lusin(LusinInput::standard());
  for (const auto& p : {BranchRule::constant(1), BranchRule::eventually_periodic({0}, {2, 1}),
                        BranchRule::constant(0)}) {
    std::size_t last = 0;
    for (std::size_t n = 0; n <= 5; ++n) {
      auto ev = strict_branch_probe(v, p, n);
      CHECK(ev.nonempty);
      CHECK(ev.precision >= last);
      last = ev.precision;
    }
  }
}
