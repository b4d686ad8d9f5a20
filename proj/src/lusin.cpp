#include "pispace/lusin.hpp"

#include <string>

#include "pispace/error.hpp"

namespace pispace {

LusinInput::LusinInput(Source source) : state_(std::make_shared<State>()) {
  state_->source = std::move(source);
}

LusinInput LusinInput::standard() {
  return LusinInput([](Nat j) { return CylExpr::atom(diagonal::finseq(j)); });
}

LusinInput LusinInput::from_lines(const std::vector<std::string>& lines) {
  std::vector<CylExpr> parsed;
  for (const auto& line : lines) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    parsed.push_back(parse_expr(line));
  }
  if (parsed.empty()) throw ValidationError("a base file needs at least one expression");
  return LusinInput([parsed](Nat j) { return parsed[j % parsed.size()]; });
}

LusinInput LusinInput::from_stream(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return from_lines(lines);
}

CylExpr LusinInput::base(Nat k) const {
  if (k % 2 == 0) throw RangeError("base sets are indexed by odd k, got " + std::to_string(k));
  const Nat j = k / 2;
  {
    std::lock_guard lock(state_->mu);
    if (auto it = state_->memo.find(j); it != state_->memo.end()) return it->second;
  }
  auto value = state_->source(j);
  std::lock_guard lock(state_->mu);
  return state_->memo.emplace(j, std::move(value)).first->second;
}

FinSeq even_step_stem(const LazyAntichain& ac, std::size_t k, Nat n) {
  FinSeq stem;
  Nat rest = 0;
  if (ac.finite()) {
    const Nat count = ac.members.size();
    stem = ac.members[n % count];
    rest = n / count;
  } else {
    auto [i, r] = diagonal::unpair(n);
    stem = *ac.member(i);
    rest = r;
  }
  return concat(stem, diagonal::tuple(rest, k + 1));
}

namespace {

// Cylinder carved at an odd node, or nullopt when V_a misses B_k.
std::optional<FinSeq> carved(const CylExpr& node, const CylExpr& base) {
  return strict_witness(node & base);
}

}  // namespace

Scheme<BaireSpaceModel> build_lusin(const LusinInput& input) {
  using Rule = Scheme<BaireSpaceModel>::RecursiveRule;
  return Scheme<BaireSpaceModel>(
      std::make_shared<BaireSpaceModel>(),
      Rule([input](const Scheme<BaireSpaceModel>& self, const FinSeq& a) -> CylExpr {
        if (a.empty()) return CylExpr::full();
        const auto parent = a.parent();
        const auto k = parent.size();
        const auto node = self.node(parent);
        const Nat n = a.back();
        if (k % 2 == 1) {
          if (auto c = carved(node, input.base(k))) {
            if (n == 0) return node - CylExpr::atom(*c);
            return CylExpr::atom(c->append(n - 1));
          }
        }
        return CylExpr::atom(even_step_stem(minimal_antichain(node), k, n));
      }));
}

Report lusin_conditions_check(const Scheme<BaireSpaceModel>& v, const LusinInput& input,
                              const Window& w) {
  Report r{"lusin-conditions", {}};
  if (w.empty()) return r;
  for_each_node(w, [&](const FinSeq& a) {
    const auto node = v.node(a);
    const bool nonempty = !is_empty(node);
    r.add("nonempty", a, nonempty ? Status::Verified : Status::Violated);
    if (!nonempty) return;

    if (a.size() % 2 == 1) {
      const auto d = as_single_cylinder(node);
      if (!d) {
        r.add("single-cylinder", a, Status::Violated, "odd-length node is not one cylinder");
      } else if (d->size() < a.size()) {
        r.add("single-cylinder", a, Status::Violated,
              "stem " + to_string(*d) + " is shorter than the node");
      } else {
        r.add("single-cylinder", a, Status::Verified);
      }

      // Condition on the carved cylinder; children n >= 1 are S_{c⌢(n−1)}.
      const auto base = input.base(a.size());
      if (is_empty(node & base)) {
        r.add("inside-base", a, Status::Verified, "node misses the base set");
        return;
      }
      if (w.breadth < 2) {
        r.add("inside-base", a, Status::Unresolved, "window too narrow to see child 1");
        return;
      }
      const auto first = as_single_cylinder(v.node(a.append(1)));
      if (!first || first->empty()) {
        r.add("inside-base", a, Status::Violated, "child 1 is not a cylinder");
        return;
      }
      const auto c = first->parent();
      const auto sc = CylExpr::atom(c);
      bool shaped = subset(sc, base);
      for (Nat n = 1; n < w.breadth && shaped; ++n) {
        shaped = equal(v.node(a.append(n)), CylExpr::atom(c.append(n - 1)));
      }
      shaped = shaped && equal(v.node(a.append(0)), node - sc) && !is_empty(node - sc);
      r.add("inside-base", a, shaped ? Status::Verified : Status::Violated,
            shaped ? "" : "carved cylinder " + to_string(c) + " is not inside the base set");
    }
  });
  r.merge(partitions_check(v, w));
  return r;
}

}  // namespace pispace
