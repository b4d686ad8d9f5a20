#include "pispace/scheme.hpp"

namespace pispace {

Scheme<BaireSpaceModel> standard_scheme() {
  return Scheme<BaireSpaceModel>(std::make_shared<BaireSpaceModel>(), [](const FinSeq& a) {
    return a.empty() ? CylExpr::full() : CylExpr::atom(a);
  });
}

StrictBranchEvidence strict_branch_probe(const Scheme<BaireSpaceModel>& v, const BranchRule& p,
                                         std::size_t n) {
  StrictBranchEvidence out;
  const auto fruit = fruit_approx(v, p, n);
  out.nonempty = !is_empty(fruit);
  if (out.nonempty) out.precision = common_stem(fruit).size();
  out.reached = out.nonempty && out.precision >= n;
  return out;
}

std::optional<Nat> preimage(const NatMap& g, Nat value, Nat bound) {
  for (Nat n = 0; n < bound; ++n) {
    if (g(n) == value) return n;
  }
  return std::nullopt;
}

}  // namespace pispace
