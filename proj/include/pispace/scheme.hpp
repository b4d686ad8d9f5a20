#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "pispace/error.hpp"
#include "pispace/report.hpp"
#include "pispace/seq.hpp"
#include "pispace/space.hpp"

namespace pispace {

/// A Souslin scheme ⟨V_a⟩ over a space model: a total rule from finite
/// sequences to open sets, evaluated lazily and memoized. Copies share the
/// memo table; node() is safe to call from several threads.
template <SpaceModel S>
class Scheme {
 public:
  using Space = S;
  using Open = typename S::Open;
  using Rule = std::function<Open(const FinSeq&)>;
  /// A rule that may consult other nodes of the scheme being defined.
  using RecursiveRule = std::function<Open(const Scheme&, const FinSeq&)>;

  Scheme(std::shared_ptr<const S> space, Rule rule)
      : Scheme(std::move(space), RecursiveRule([rule = std::move(rule)](const Scheme&,
                                                                       const FinSeq& a) {
          return rule(a);
        })) {}

  Scheme(std::shared_ptr<const S> space, RecursiveRule rule)
      : state_(std::make_shared<State>(std::move(space), std::move(rule))) {}

  const S& space() const { return *state_->space; }
  const std::shared_ptr<const S>& space_ptr() const { return state_->space; }

  Open node(const FinSeq& a) const {
    {
      std::lock_guard lock(state_->mu);
      if (auto it = state_->memo.find(a); it != state_->memo.end()) return it->second;
    }
    // Evaluated without the lock: rules may recurse into this scheme.
    Open value = state_->rule(*this, a);
    std::lock_guard lock(state_->mu);
    return state_->memo.emplace(a, std::move(value)).first->second;
  }

  Open operator()(const FinSeq& a) const { return node(a); }

  std::size_t evaluated() const {
    std::lock_guard lock(state_->mu);
    return state_->memo.size();
  }

 private:
  struct State {
    State(std::shared_ptr<const S> s, RecursiveRule r)
        : space(std::move(s)), rule(std::move(r)) {}
    std::shared_ptr<const S> space;
    RecursiveRule rule;
    std::mutex mu;
    std::unordered_map<FinSeq, Open> memo;
  };
  std::shared_ptr<State> state_;
};

using NatMap = std::function<Nat(Nat)>;

/// S_a over the Baire model.
Scheme<BaireSpaceModel> standard_scheme();

/// V^g: node a ↦ V_{g∘a}.
template <SpaceModel S>
Scheme<S> transform_g(const Scheme<S>& v, NatMap g) {
  return Scheme<S>(v.space_ptr(), [v, g = std::move(g)](const FinSeq& a) {
    return v.node(compose(g, a));
  });
}

/// Checks V_⟨⟩ = X, V_{a⌢n} ⊆ V_a (hard) and V_a ⊆ ⋃_{n<breadth} V_{a⌢n}
/// (verified, or unresolved when the finite union falls short).
template <SpaceModel S>
Report covers_check(const Scheme<S>& v, const Window& w) {
  const auto& space = v.space();
  Report r{"covers", {}};
  r.add("root", {}, space.equal(v.node({}), space.whole()) ? Status::Verified : Status::Violated,
        "V_ε must equal the whole space");
  for_each_node(w, [&](const FinSeq& a) {
    const auto node = v.node(a);
    bool hard = false;
    std::optional<typename S::Open> acc;
    for (Nat n = 0; n < w.breadth; ++n) {
      const auto child = v.node(a.append(n));
      if (!space.subset(child, node)) {
        r.add("child-inside", a.append(n), Status::Violated, "child is not contained in its parent");
        hard = true;
      }
      acc = acc ? space.unite(*acc, child) : child;
    }
    if (hard) return;
    if (space.subset(node, *acc)) {
      r.add("covered", a, Status::Verified);
    } else {
      r.add("covered", a, Status::Unresolved,
            "first " + std::to_string(w.breadth) + " children do not cover the node");
    }
  });
  return r;
}

/// covers_check plus pairwise disjointness of the first `breadth` children.
template <SpaceModel S>
Report partitions_check(const Scheme<S>& v, const Window& w) {
  const auto& space = v.space();
  Report r = covers_check(v, w);
  r.name = "partitions";
  for_each_node(w, [&](const FinSeq& a) {
    std::vector<typename S::Open> children;
    for (Nat n = 0; n < w.breadth; ++n) children.push_back(v.node(a.append(n)));
    bool ok = true;
    for (Nat i = 0; i < w.breadth; ++i) {
      for (Nat j = i + 1; j < w.breadth; ++j) {
        if (!space.is_empty(space.intersect(children[i], children[j]))) {
          r.add("disjoint", a, Status::Violated,
                "children " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
          ok = false;
        }
      }
    }
    if (ok) r.add("disjoint", a, Status::Verified);
  });
  return r;
}

/// ⋂_{k<=n} V_{p↾k}.
template <SpaceModel S>
typename S::Open fruit_approx(const Scheme<S>& v, const BranchRule& p, std::size_t n) {
  auto acc = v.node({});
  for (std::size_t k = 1; k <= n; ++k) acc = v.space().intersect(acc, v.node(restrict(p, k)));
  return acc;
}

struct StrictBranchEvidence {
  bool nonempty = false;
  /// Length of the longest c with fruit_approx ⊆ S_c.
  std::size_t precision = 0;
  /// precision >= n
  bool reached = false;
};

/// Finite-depth evidence toward a singleton fruit; never a proof of it.
StrictBranchEvidence strict_branch_probe(const Scheme<BaireSpaceModel>& v, const BranchRule& p,
                                         std::size_t n);

/// First b ⊒ a, in diagonal order of the extension, with ∅ ≠ V_b ⊆ u.
/// Throws EmptySetError when u misses V_a.
template <SpaceModel S>
std::optional<FinSeq> pi_net_probe(const Scheme<S>& v, const FinSeq& a, const typename S::Open& u,
                                   Nat budget) {
  const auto& space = v.space();
  if (space.is_empty(space.intersect(u, v.node(a)))) {
    throw EmptySetError("pi_net_probe target does not meet V_" + to_string(a));
  }
  for (Nat i = 0; i < budget; ++i) {
    auto b = concat(a, diagonal::finseq(i));
    auto vb = v.node(b);
    if (!space.is_empty(vb) && space.subset(vb, u)) return b;
  }
  return std::nullopt;
}

/// Smallest n < bound with g(n) = value.
std::optional<Nat> preimage(const NatMap& g, Nat value, Nat bound);

/// Checks the three permutation identities relating V, g∘a and g∘(a⌢n) on
/// the window; g must hit every value < breadth below `preimage_bound`.
template <SpaceModel S>
Report perm_identity_check(const Scheme<S>& v, const NatMap& g, const Window& w,
                           Nat preimage_bound = 0) {
  if (preimage_bound == 0) preimage_bound = 4 * w.breadth;
  const auto& space = v.space();
  Report r{"perm-identities", {}};
  for (Nat value = 0; value < w.breadth; ++value) {
    if (!preimage(g, value, preimage_bound)) {
      r.add("surjective", {}, Status::Breach,
            "g has no preimage of " + std::to_string(value) + " below " +
                std::to_string(preimage_bound));
      return r;
    }
  }
  auto lift = [&](const FinSeq& c) {
    std::vector<Nat> out;
    for (auto v : c) out.push_back(*preimage(g, v, preimage_bound));
    return FinSeq(std::move(out));
  };

  for_each_node(w, [&](const FinSeq& a) {
    const auto ga = compose(g, a);

    // (a) {g∘(a^c)} = {(g∘a)^c}, on extensions that stay inside the window
    bool ok = true;
    Window ext{w.depth - a.size(), w.breadth};
    for_each_node(ext, [&](const FinSeq& c) {
      if (compose(g, concat(a, c)) != concat(ga, compose(g, c))) ok = false;
      if (compose(g, concat(a, lift(c))) != concat(ga, c)) ok = false;
    });
    r.add("index-sets", a, ok ? Status::Verified : Status::Violated);

    // (b) ⋃_n V_{(g∘a)⌢n} = ⋃_n V_{g∘(a⌢n)}, as mutual inclusion of partial unions
    Nat reach = 0;
    for (Nat n = 0; n < w.breadth; ++n) reach = std::max(reach, g(n) + 1);
    auto union_plain = [&](Nat upto) {
      auto acc = v.node(ga.append(0));
      for (Nat n = 1; n < upto; ++n) acc = space.unite(acc, v.node(ga.append(n)));
      return acc;
    };
    auto union_mapped = [&](Nat upto) {
      auto acc = v.node(compose(g, a.append(0)));
      for (Nat n = 1; n < upto; ++n) acc = space.unite(acc, v.node(compose(g, a.append(n))));
      return acc;
    };
    const bool forward = space.subset(union_plain(w.breadth), union_mapped(preimage_bound));
    const bool backward = space.subset(union_mapped(w.breadth), union_plain(reach));
    r.add("child-unions", a, forward && backward ? Status::Verified : Status::Violated);

    // (c) ⋂_n V_{g∘(q↾n)} = ⋂_n V_{(g∘q)↾n} along q = a⌢0⌢0…
    const auto q = BranchRule::eventually_constant(a, 0);
    const auto gq = q.mapped(g);
    auto lhs = v.node({});
    auto rhs = v.node({});
    for (std::size_t k = 1; k <= w.depth; ++k) {
      lhs = space.intersect(lhs, v.node(compose(g, restrict(q, k))));
      rhs = space.intersect(rhs, v.node(restrict(gq, k)));
    }
    r.add("fruits", a, space.equal(lhs, rhs) ? Status::Verified : Status::Violated);
  });
  return r;
}

/// Window evidence that V^g inherits structure from V: (a) no hard covers
/// violation appears in V^g when V has none, (c) every V^g node is a node of V
/// and (e) each pi_net_probe hit for V below g∘a lifts to a hit for V^g below a.
template <SpaceModel S>
Report transform_property_check(const Scheme<S>& v, const NatMap& g, const Window& w,
                                 Nat probe_budget = 64, Nat preimage_bound = 0) {
  if (preimage_bound == 0) preimage_bound = 4 * w.breadth;
  const auto& space = v.space();
  const auto vg = transform_g(v, g);
  Report r{"transform-properties", {}};

  if (covers_check(v, w).hard_violations() == 0) {
    const auto transformed = covers_check(vg, w);
    r.add("covers-inherited", {}, transformed.hard_violations() == 0 ? Status::Verified
                                                                    : Status::Violated);
  } else {
    r.add("covers-inherited", {}, Status::Breach, "V itself has hard covers violations");
  }

  Nat reach = 0;
  for (Nat n = 0; n < w.breadth; ++n) reach = std::max(reach, g(n) + 1);
  for_each_node(w, [&](const FinSeq& a) {
    const auto ga = compose(g, a);
    r.add("node-image", a, space.equal(vg.node(a), v.node(ga)) ? Status::Verified
                                                                : Status::Violated);

    for (Nat j = 0; j < reach; ++j) {
      const auto target = v.node(ga.append(j));
      if (space.is_empty(target)) continue;
      const auto hit = pi_net_probe(v, ga, target, probe_budget);
      if (!hit) {
        r.add("pi-net-lift", a, Status::Unresolved, "no hit for V within the probe budget");
        continue;
      }
      std::vector<Nat> lifted(a.begin(), a.end());
      bool liftable = true;
      for (std::size_t i = ga.size(); i < hit->size(); ++i) {
        auto pre = preimage(g, (*hit)[i], preimage_bound);
        if (!pre) {
          liftable = false;
          break;
        }
        lifted.push_back(*pre);
      }
      if (!liftable) {
        r.add("pi-net-lift", a, Status::Unresolved, "hit uses a value without a small preimage");
        continue;
      }
      const auto image = vg.node(FinSeq(std::move(lifted)));
      const bool ok = !space.is_empty(image) && space.subset(image, target);
      r.add("pi-net-lift", a, ok ? Status::Verified : Status::Violated);
    }
  });
  return r;
}

/// At each window node containing x, looks for two distinct children below
/// the breadth that both contain x. Nodes where none exist are violations.
template <SpaceModel S>
Report dense_in_itself_probe(const Scheme<S>& v, const typename S::Point& x, const Window& w) {
  const auto& space = v.space();
  Report r{"dense-in-itself", {}};
  if (w.empty()) return r;
  bool in_flesh = false;
  for_each_node(w, [&](const FinSeq& a) { in_flesh = in_flesh || space.contains(v.node(a), x); });
  if (!in_flesh) {
    r.add("flesh", {}, Status::Breach, "point lies in no window node");
    return r;
  }
  for_each_node(w, [&](const FinSeq& a) {
    if (!space.contains(v.node(a), x)) return;
    Nat hits = 0;
    for (Nat n = 0; n < w.breadth && hits < 2; ++n) {
      if (space.contains(v.node(a.append(n)), x)) ++hits;
    }
    r.add("two-children", a, hits >= 2 ? Status::Verified : Status::Violated,
          hits >= 2 ? "" : "fewer than two children below the breadth contain the point");
  });
  return r;
}

/// {a in window : x ∈ V_a}, grown from the root through nodes containing x.
template <SpaceModel S>
std::vector<FinSeq> branches_window(const Scheme<S>& v, const typename S::Point& x,
                                    const Window& w) {
  std::vector<FinSeq> out;
  if (!v.space().contains(v.node({}), x)) return out;
  std::vector<FinSeq> frontier{FinSeq{}};
  while (!frontier.empty()) {
    auto a = frontier.back();
    frontier.pop_back();
    out.push_back(a);
    if (a.size() == w.depth) continue;
    for (Nat n = 0; n < w.breadth; ++n) {
      auto child = a.append(n);
      if (v.space().contains(v.node(child), x)) frontier.push_back(child);
    }
  }
  std::sort(out.begin(), out.end(), ShortLex{});
  return out;
}

/// {"model", "window", "nodes": {text key: rendered open}}.
template <SpaceModel S>
nlohmann::json dump_scheme(const Scheme<S>& v, const Window& w) {
  nlohmann::json out;
  out["model"] = S::kName;
  out["window"] = {{"depth", w.depth}, {"breadth", w.breadth}};
  auto& nodes = out["nodes"] = nlohmann::json::object();
  for_each_node(w, [&](const FinSeq& a) { nodes[to_string(a)] = v.space().render(v.node(a)); });
  return out;
}

}  // namespace pispace
