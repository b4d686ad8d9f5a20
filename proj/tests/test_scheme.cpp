#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "pispace/generators.hpp"
#include "pispace/error.hpp"
#include "pispace/scheme.hpp"

using namespace pispace;

namespace {

Nat half(Nat n) { return n / 2; }
Nat swap01(Nat n) { return n == 0 ? 1 : n == 1 ? 0 : n; }

bool has_hard(const Report& r) { return r.hard_violations() > 0; }

}  // namespace

TEST_CASE("standard scheme nodes") {
  auto v = standard_scheme();
  CHECK(equal(v.node({}), CylExpr::full()));
  CHECK(equal(v.node({2, 1}), CylExpr::atom({2, 1})));
  CHECK(equal(v({2, 1}), v.node({2, 1})));
}

TEST_CASE("standard scheme partitions with unresolved covering") {
  auto v = standard_scheme();
  for (Nat m = 1; m <= 4; ++m) {
    auto r = partitions_check(v, Window{3, m});
    CHECK(r.passed());
    CHECK(r.count(Status::Unresolved) > 0);
    // every node of the window is unresolved on the covering side
    std::size_t nodes = 0;
    for_each_node(Window{3, m}, [&](const FinSeq&) { ++nodes; });
    std::size_t unresolved = 0;
    for (const auto& f : r.findings) unresolved += f.check == "covered" && f.status == Status::Unresolved;
    CHECK(unresolved == nodes);
  }
}

TEST_CASE("covers check flags a child outside its parent") {
  auto base = standard_scheme();
  Scheme<BaireSpaceModel> w(base.space_ptr(), [](const FinSeq& a) {
    if (a.empty()) return CylExpr::atom({5});
    return CylExpr::atom(a);
  });
  auto r = covers_check(w, Window{1, 2});
  bool root_flagged = false;
  bool child_flagged = false;
  for (const auto& f : r.findings) {
    if (f.status != Status::Violated) continue;
    root_flagged = root_flagged || f.check == "root";
    child_flagged = child_flagged || f.node == FinSeq{0};
  }
  CHECK(root_flagged);
  CHECK(child_flagged);
}

TEST_CASE("duplicated children break the partition") {
  auto base = standard_scheme();
  Scheme<BaireSpaceModel> v(base.space_ptr(), [](const FinSeq& a) {
    if (a.empty()) return CylExpr::full();
    std::vector<Nat> e(a.begin(), a.end());
    if (e.back() == 1) e.back() = 0;
    return CylExpr::atom(FinSeq(e));
  });
  CHECK(has_hard(partitions_check(v, Window{1, 3})));
}

TEST_CASE("finite covering scheme verifies") {
  auto space = std::make_shared<FiniteSpaceModel>(FiniteSpaceModel::sierpinski());
  Scheme<FiniteSpaceModel> v(space, [space](const FinSeq&) { return space->whole(); });
  Scheme<FiniteSpaceModel> shrinking(space, [space](const FinSeq& a) {
    const bool below = std::find(a.begin(), a.end(), Nat{1}) != a.end();
    return below ? PointSet::of({1}) : space->whole();
  });
  CHECK(covers_check(shrinking, Window{3, 2}).passed());
  CHECK(covers_check(shrinking, Window{3, 2}).count(Status::Unresolved) == 0);
  auto r = covers_check(v, Window{3, 2});
  CHECK(r.passed());
  CHECK(r.count(Status::Unresolved) == 0);
}

TEST_CASE("fruit approximations") {
  auto v = standard_scheme();
  auto p = BranchRule::eventually_periodic({3}, {1, 0});
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(equal(fruit_approx(v, p, n), CylExpr::atom(restrict(p, n))));
    CHECK(subset(fruit_approx(v, p, n + 1), fruit_approx(v, p, n)));
  }

  auto ev = strict_branch_probe(v, p, 5);
  CHECK(ev.nonempty);
  CHECK(ev.precision == 5);
  CHECK(ev.reached);

  Scheme<BaireSpaceModel> flat(v.space_ptr(), [](const FinSeq&) { return CylExpr::full(); });
  auto stuck = strict_branch_probe(flat, p, 4);
  CHECK(stuck.nonempty);
  CHECK(stuck.precision == 0);
  CHECK_FALSE(stuck.reached);
}

TEST_CASE("finite fruit stabilizes once children repeat") {
  auto space = std::make_shared<FiniteSpaceModel>(FiniteSpaceModel::discrete(3));
  Scheme<FiniteSpaceModel> v(space, [space](const FinSeq& a) {
    if (a.size() < 2) return space->whole();
    return PointSet::of({0, 1});
  });
  auto p = BranchRule::constant(0);
  CHECK(fruit_approx(v, p, 1) == space->whole());
  for (std::size_t n = 2; n < 6; ++n) CHECK(fruit_approx(v, p, n) == PointSet::of({0, 1}));
}

TEST_CASE("pi-net probe") {
  auto v = standard_scheme();
  CHECK(pi_net_probe(v, {}, CylExpr::atom({4}), 100) == FinSeq{4});
  CHECK(pi_net_probe(v, {1}, CylExpr::atom({1, 2}), 100) == FinSeq{1, 2});
  CHECK_FALSE(pi_net_probe(v, {}, CylExpr::atom({4, 4, 4}), 3).has_value());
  CHECK_THROWS_AS(pi_net_probe(v, {2}, CylExpr::atom({1}), 10), EmptySetError);

  // replay of the search under g = ⌊n/2⌋: the first b in diagonal order with g∘b = ⟨1⟩
  auto vg = transform_g(v, half);
  auto hit = pi_net_probe(vg, {}, CylExpr::atom({1}), 100);
  REQUIRE(hit);
  std::optional<FinSeq> expected;
  for (Nat i = 0; i < 100 && !expected; ++i) {
    auto b = diagonal::finseq(i);
    if (!b.empty() && compose(half, b)[0] == 1) expected = b;
  }
  CHECK(hit == expected);
  CHECK(equal(vg.node(*hit), CylExpr::atom(compose(half, *hit))));
}

TEST_CASE("transform by g") {
  auto v = standard_scheme();
  auto id = transform_g(v, [](Nat n) { return n; });
  for_each_node(Window{3, 3}, [&](const FinSeq& a) { CHECK(equal(id.node(a), v.node(a))); });

  auto zero = transform_g(v, [](Nat) { return Nat{0}; });
  CHECK(equal(zero.node({5}), v.node({0})));

  auto vg = transform_g(v, half);
  CHECK(equal(vg.node({2, 3}), CylExpr::atom({1, 1})));
}

TEST_CASE("permutation identities") {
  auto v = standard_scheme();
  for (NatMap g : {NatMap([](Nat n) { return n; }), NatMap(half), NatMap(swap01)}) {
    auto r = perm_identity_check(v, g, Window{3, 6});
    CHECK(r.passed());
    CHECK(r.count(Status::Unresolved) == 0);
  }
  auto breach = perm_identity_check(v, [](Nat n) { return 2 * n; }, Window{2, 3});
  CHECK(breach.count(Status::Breach) == 1);
  CHECK_FALSE(breach.passed());
}

TEST_CASE("transform properties") {
  auto v = standard_scheme();
  for (NatMap g : {NatMap([](Nat n) { return n; }), NatMap(half), NatMap(swap01)}) {
    auto r = transform_property_check(v, g, Window{2, 4});
    CHECK(r.passed());
  }
}

TEST_CASE("fruits commute with g along random branches") {
  // independent route: build g∘q by mapping the branch values directly
  std::mt19937_64 rng(3);
  auto v = standard_scheme();
  auto vg = transform_g(v, half);
  for (int trial = 0; trial < 50; ++trial) {
    auto stem = gen::random_seq(rng, 3, 5);
    auto q = BranchRule::eventually_periodic(stem, {2, 5});
    std::vector<Nat> mapped;
    for (std::size_t k = 0; k < 6; ++k) mapped.push_back(q(k) / 2);
    for (std::size_t n = 0; n <= 6; ++n) {
      auto direct = CylExpr::atom(restrict(FinSeq(mapped), n));
      CHECK(equal(fruit_approx(vg, q, n), direct));
      CHECK(equal(fruit_approx(vg, q, n), fruit_approx(v, q.mapped(half), n)));
    }
  }
}

TEST_CASE("dense-in-itself probe") {
  auto v = standard_scheme();
  auto x = BranchRule::eventually_periodic({1, 2}, {0});
  auto dup = dense_in_itself_probe(transform_g(v, half), x, Window{3, 6});
  CHECK(dup.passed());
  // x lies in V^g_a iff ⌊a⌋ ⊑ x; two preimages per value give 1 + 2 + 4 + 8 nodes
  CHECK(dup.count(Status::Verified) == 15);

  auto part = dense_in_itself_probe(v, x, Window{3, 6});
  CHECK(part.count(Status::Violated) == 4);
  CHECK(dense_in_itself_probe(v, x, Window{3, 0}).findings.empty());
}

TEST_CASE("branches window") {
  auto v = standard_scheme();
  auto p = BranchRule::eventually_periodic({2, 0, 1}, {1});
  auto tree = branches_window(v, p, Window{3, 4});
  REQUIRE(tree.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(tree[k] == restrict(p, k));

  Scheme<BaireSpaceModel> off(v.space_ptr(), [](const FinSeq&) { return CylExpr::atom({9}); });
  CHECK(branches_window(off, p, Window{3, 4}).empty());

  auto dup = branches_window(transform_g(v, half), BranchRule::constant(0), Window{2, 4});
  // nodes a with ⌊a⌋ = 0…0, entries < 4: 1 + 2 + 4
  CHECK(dup.size() == 7);
}

TEST_CASE("scheme dump") {
  auto space = std::make_shared<FiniteSpaceModel>(FiniteSpaceModel::sierpinski());
  Scheme<FiniteSpaceModel> v(space, [space](const FinSeq& a) {
    return a.empty() ? space->whole() : PointSet::of({1});
  });
  auto j = dump_scheme(v, Window{1, 2});
  CHECK(j["model"] == "finite");
  CHECK(j["window"]["depth"] == 1);
  CHECK(j["nodes"]["ε"] == nlohmann::json::array({"0", "1"}));
  CHECK(j["nodes"]["1"] == nlohmann::json::array({"1"}));

  auto b = dump_scheme(standard_scheme(), Window{1, 1});
  CHECK(b["nodes"]["0"] == "S(0)");
}

TEST_CASE("memo is consistent across threads") {
  std::atomic<int> calls{0};
  auto base = standard_scheme();
  Scheme<BaireSpaceModel> v(base.space_ptr(), [&calls](const FinSeq& a) {
    ++calls;
    return a.empty() ? CylExpr::full() : CylExpr::atom(a);
  });
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&v] {
      for_each_node(Window{3, 3}, [&](const FinSeq& a) { (void)v.node(a); });
    });
  }
  for (auto& t : pool) t.join();
  CHECK(v.evaluated() == 40);
  for_each_node(Window{3, 3}, [&](const FinSeq& a) { CHECK(equal(v.node(a), v.node(a))); });
}
