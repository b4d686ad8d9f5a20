#include "pispace/choquet.hpp"

namespace pispace {

StrategyII<BaireSpaceModel> cylinder_strategy() {
  return [](const GameHistory<BaireSpaceModel>& s, const CylExpr& u) {
    auto c = witness_cylinder(u);
    if (!c) throw IllegalMove(Player::I, s.size(), "empty move");
    std::vector<Nat> e(c->begin(), c->end());
    while (e.size() < s.size() + 1) e.push_back(0);
    return CylExpr::atom(FinSeq(std::move(e)));
  };
}

}  // namespace pispace
