#pragma once

#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pispace/cylinder.hpp"
#include "pispace/report.hpp"
#include "pispace/scheme.hpp"

namespace pispace {

/// Enumeration k ↦ B_k of base sets at odd k, materialized on demand.
/// The caller declares that {B_k} is a base of a topology ρ finer than the
/// Baire topology in which nonempty cylinder-opens form a π-base; that claim
/// is not checked.
class LusinInput {
 public:
  using Source = std::function<CylExpr(Nat)>;

  explicit LusinInput(Source source);

  /// B_{2j+1} = S_{finseq(j)}: every cylinder, in diagonal order.
  static LusinInput standard();
  /// B_{2j+1} is line j mod L of a file holding L expressions.
  static LusinInput from_lines(const std::vector<std::string>& lines);
  static LusinInput from_stream(std::istream& in);

  /// Throws RangeError for even k.
  CylExpr base(Nat k) const;

 private:
  struct State {
    Source source;
    std::mutex mu;
    std::map<Nat, CylExpr> memo;
  };
  std::shared_ptr<State> state_;
};

/// The recursion on lh(a): even steps split V_a into the cylinders
/// S_{c⌢d}, c in its minimal antichain and d ∈ ω^{lh(a)+1}; odd steps that
/// meet B_k carve a strict witness S_c out of V_a ∩ B_k and split it.
Scheme<BaireSpaceModel> build_lusin(const LusinInput& input);

/// D(n) for a node of length k whose minimal antichain is ac: the n-th stem
/// c⌢d, c ∈ ac and d ∈ ω^{k+1}, under the diagonal pairing. Injective in n.
FinSeq even_step_stem(const LazyAntichain& ac, std::size_t k, Nat n);

/// Per-node conditions on the window: every node nonempty; odd-length nodes
/// are single cylinders S_d with lh(d) >= lh(a); at odd a meeting B_{lh(a)},
/// the carved cylinder S_c lies inside B_{lh(a)}. Includes partitions_check.
Report lusin_conditions_check(const Scheme<BaireSpaceModel>& v, const LusinInput& input,
                              const Window& w);

}  // namespace pispace
