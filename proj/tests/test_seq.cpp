#include <doctest.h>

#include <random>

#include "pispace/generators.hpp"
#include "pispace/error.hpp"
#include "pispace/seq.hpp"

using namespace pispace;

TEST_CASE("concat") {
  CHECK(concat({}, {1, 2}) == FinSeq{1, 2});
  CHECK(concat({0}, {}) == FinSeq{0});
  CHECK(concat({3, 1}, {4}) == FinSeq{3, 1, 4});
  CHECK(FinSeq{3, 1}.append(4) == concat({3, 1}, {4}));
}

TEST_CASE("restrict") {
  CHECK(restrict(FinSeq{3, 1, 4}, 2) == FinSeq{3, 1});
  CHECK(restrict(FinSeq{3, 1, 4}, 0) == FinSeq{});
  CHECK(restrict(BranchRule::constant(7), 3) == FinSeq{7, 7, 7});
  CHECK_THROWS_AS(restrict(FinSeq{1}, 2), RangeError);
}

TEST_CASE("is_prefix") {
  CHECK(is_prefix({1}, {1, 0}));
  CHECK(is_prefix({}, {5, 5}));
  CHECK(is_prefix({}, BranchRule::constant(3)));
  CHECK_FALSE(is_prefix({2}, {1, 2}));
  CHECK(is_prefix({0, 0}, BranchRule::constant(0)));
  CHECK_FALSE(is_prefix({0, 1}, BranchRule::constant(0)));
}

TEST_CASE("branch rules") {
  auto p = BranchRule::eventually_periodic({9}, {1, 2});
  CHECK(restrict(p, 6) == FinSeq{9, 1, 2, 1, 2, 1});
  auto q = BranchRule::eventually_constant({9, 1}, 2);
  CHECK(agree_to_depth(p, q, 3));
  CHECK_FALSE(agree_to_depth(p, q, 4));
  CHECK(restrict(p.mapped([](Nat n) { return n / 2; }), 3) == FinSeq{4, 0, 1});
  CHECK_THROWS_AS(BranchRule::eventually_periodic({}, {}), RangeError);
}

TEST_CASE("text and json rendering") {
  CHECK(to_string(FinSeq{}) == "ε");
  CHECK(to_string(FinSeq{0, 3, 1}) == "0.3.1");
  CHECK(parse_finseq("0.3.1") == FinSeq{0, 3, 1});
  CHECK(parse_finseq("ε") == FinSeq{});
  CHECK_THROWS_AS(parse_finseq("1..2"), ParseError);
  CHECK_THROWS_AS(parse_finseq("1.x"), ParseError);
  nlohmann::json j = FinSeq{4, 2};
  CHECK(j.dump() == "[4,2]");
  CHECK(j.get<FinSeq>() == FinSeq{4, 2});
  CHECK_THROWS_AS(nlohmann::json::parse("[1,-2]").get<FinSeq>(), ParseError);
}

TEST_CASE("sequence algebra properties") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = gen::random_seq(rng, 4, 2);
    auto t = gen::random_seq(rng, 4, 2);
    auto u = gen::random_seq(rng, 4, 2);
    CHECK(concat(concat(s, t), u) == concat(s, concat(t, u)));
    CHECK(concat(FinSeq{}, s) == s);
    CHECK(concat(s, FinSeq{}) == s);
    CHECK(restrict(concat(s, t), s.size()) == s);
    CHECK(parse_finseq(to_string(s)) == s);

    CHECK(is_prefix(s, s));
    if (is_prefix(s, t) && is_prefix(t, s)) CHECK(s == t);
    if (is_prefix(s, t) && is_prefix(t, u)) CHECK(is_prefix(s, u));
  }
}

TEST_CASE("diagonal index round trips") {
  for (Nat n = 0; n < 10000; ++n) {
    auto [i, j] = diagonal::unpair(n);
    REQUIRE(diagonal::pair(i, j) == n);
  }
  for (Nat n = 0; n < 10000; ++n) {
    REQUIRE(diagonal::finseq_index(diagonal::finseq(n)) == n);
    REQUIRE(diagonal::tuple_index(diagonal::tuple(n, 3)) == n);
  }
  CHECK(diagonal::finseq(0) == FinSeq{});
  CHECK(diagonal::finseq_index(FinSeq{4}) == 15);
  CHECK(diagonal::pair(0, 1) == 2);
  CHECK(diagonal::pair(1, 0) == 1);
}
