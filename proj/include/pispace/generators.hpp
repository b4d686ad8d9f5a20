#pragma once

// Seeded random generators for property checks and the verification suites.

#include <memory>
#include <random>
#include <set>
#include <vector>

#include "pispace/cylinder.hpp"
#include "pispace/seq.hpp"

namespace pispace::gen {

inline FinSeq random_seq(std::mt19937_64& rng, std::size_t max_len, Nat max_entry) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<Nat> entry_dist(0, max_entry);
  std::vector<Nat> out(len_dist(rng));
  for (auto& v : out) v = entry_dist(rng);
  return FinSeq(std::move(out));
}

/// Random expression with at most `atoms` atoms; mention entries <= max_entry,
/// lengths <= max_len.
inline CylExpr random_expr(std::mt19937_64& rng, int atoms, std::size_t max_len,
                           Nat max_entry) {
  std::uniform_int_distribution<int> coin(0, 99);
  if (atoms <= 1) {
    const int roll = coin(rng);
    if (roll < 5) return CylExpr::empty();
    if (roll < 10) return CylExpr::full();
    return CylExpr::atom(random_seq(rng, max_len, max_entry));
  }
  std::uniform_int_distribution<int> split(1, atoms - 1);
  const int left = split(rng);
  auto a = random_expr(rng, left, max_len, max_entry);
  auto b = random_expr(rng, atoms - left, max_len, max_entry);
  switch (coin(rng) % 3) {
    case 0:
      return a | b;
    case 1:
      return a & b;
    default:
      return a - b;
  }
}

/// Eventually periodic branch: stem and period drawn with entries <= max_entry.
inline BranchRule random_branch(std::mt19937_64& rng, std::size_t max_stem, Nat max_entry) {
  auto stem = random_seq(rng, max_stem, max_entry);
  std::vector<Nat> period;
  std::uniform_int_distribution<Nat> entry_dist(0, max_entry);
  std::uniform_int_distribution<std::size_t> len_dist(1, 3);
  for (std::size_t i = len_dist(rng); i > 0; --i) period.push_back(entry_dist(rng));
  return BranchRule::eventually_periodic(stem, FinSeq(std::move(period)));
}

/// Finitely-branching tree {a : entries < bound, no prefix of a is a cut},
/// with cut nodes of length 1..3 drawn at random.
inline NDTree random_nd_tree(std::mt19937_64& rng, Nat max_bound) {
  std::uniform_int_distribution<Nat> bound_dist(1, max_bound);
  const Nat bound = bound_dist(rng);
  auto cuts = std::make_shared<std::set<FinSeq>>();
  std::uniform_int_distribution<int> count_dist(0, 3);
  std::uniform_int_distribution<std::size_t> len_dist(1, 3);
  std::uniform_int_distribution<Nat> entry_dist(0, bound - 1);
  for (int i = count_dist(rng); i > 0; --i) {
    std::vector<Nat> c(len_dist(rng));
    for (auto& v : c) v = entry_dist(rng);
    cuts->insert(FinSeq(std::move(c)));
  }
  NDTree t;
  t.branching_bound = bound;
  t.contains = [bound, cuts](const FinSeq& a) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] >= bound || cuts->contains(restrict(a, k + 1))) return false;
    }
    return true;
  };
  return t;
}

}  // namespace pispace::gen
