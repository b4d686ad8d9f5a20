#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pispace/error.hpp"
#include "pispace/scheme.hpp"
#include "pispace/space.hpp"

namespace pispace {

template <SpaceModel S>
struct Round {
  typename S::Open u;
  typename S::Open v;
};

/// ⟨⟨U_0,V_0⟩, ⟨U_1,V_1⟩, …⟩, redundant pairs included.
template <SpaceModel S>
using GameHistory = std::vector<Round<S>>;

/// Player II: (history so far, I's latest move) ↦ reply.
template <SpaceModel S>
using StrategyII =
    std::function<typename S::Open(const GameHistory<S>&, const typename S::Open&)>;

/// Player I: history so far ↦ next move.
template <SpaceModel S>
using StrategyI = std::function<typename S::Open(const GameHistory<S>&)>;

enum class Player { I, II };

inline const char* to_string(Player p) { return p == Player::I ? "I" : "II"; }

/// A move that is empty or not inside the previous set.
class IllegalMove : public ValidationError {
 public:
  IllegalMove(Player who, std::size_t round, const std::string& what)
      : ValidationError(std::string("player ") + pispace::to_string(who) + ", round " +
                        std::to_string(round) + ": " + what),
        player(who),
        round(round) {}
  Player player;
  std::size_t round;
};

/// Throws IllegalMove at the first entry breaking U_0 ⊇ V_0 ⊇ U_1 ⊇ … or
/// nonemptiness.
template <SpaceModel S>
void check_history(const S& space, const GameHistory<S>& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (space.is_empty(s[k].u)) throw IllegalMove(Player::I, k, "empty move");
    if (k > 0 && !space.subset(s[k].u, s[k - 1].v)) {
      throw IllegalMove(Player::I, k, "move is not inside II's previous reply");
    }
    if (space.is_empty(s[k].v)) throw IllegalMove(Player::II, k, "empty reply");
    if (!space.subset(s[k].v, s[k].u)) {
      throw IllegalMove(Player::II, k, "reply is not inside I's move");
    }
  }
}

/// f(s): drops ⟨U_0,V_0⟩ when V_0 = U_0 = X and ⟨U_k,V_k⟩ (k > 0) when
/// V_k = U_k = V_{k−1}.
template <SpaceModel S>
GameHistory<S> remove_redundant(const S& space, const GameHistory<S>& s,
                                const typename S::Open& whole) {
  check_history(space, s);
  GameHistory<S> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& prev = k == 0 ? whole : s[k - 1].v;
    const bool redundant = space.equal(s[k].u, s[k].v) && space.equal(s[k].v, prev);
    if (!redundant) out.push_back(s[k]);
  }
  return out;
}

/// Γ′: replies X to X at move 0, echoes V_n when I echoes it, and otherwise
/// asks Γ about the history with redundant pairs removed.
template <SpaceModel S>
StrategyII<S> modify_strategy(std::shared_ptr<const S> space, StrategyII<S> gamma) {
  return [space, gamma = std::move(gamma)](const GameHistory<S>& s, const typename S::Open& u) {
    const auto whole = space->whole();
    if (s.empty()) {
      if (space->equal(u, whole)) return whole;
      return gamma({}, u);
    }
    const auto& last = s.back().v;
    if (space->equal(u, last)) return last;
    return gamma(remove_redundant(*space, s, whole), u);
  };
}

template <SpaceModel S>
StrategyII<S> copy_strategy() {
  return [](const GameHistory<S>&, const typename S::Open& u) { return u; };
}

/// Replies S_c with c a witness of U padded by zeros to length >= lh(s)+1.
StrategyII<BaireSpaceModel> cylinder_strategy();

/// Plays the listed moves, then repeats II's latest reply.
template <SpaceModel S>
StrategyI<S> scripted_player(std::shared_ptr<const S> space,
                             std::vector<typename S::Open> moves) {
  return [space, moves = std::move(moves)](const GameHistory<S>& s) {
    if (s.size() < moves.size()) return moves[s.size()];
    return s.empty() ? space->whole() : s.back().v;
  };
}

/// Opens with X, then plays W_{a(k)} = pi_base(V_k, a(k)); echoes past lh(a).
template <SpaceModel S>
StrategyI<S> pi_base_player(std::shared_ptr<const S> space, FinSeq a) {
  return [space, a = std::move(a)](const GameHistory<S>& s) {
    if (s.empty()) return space->whole();
    const auto k = s.size() - 1;
    if (k >= a.size()) return s.back().v;
    return space->pi_base(s.back().v, a[k]);
  };
}

template <SpaceModel S>
struct GameOutcome {
  GameHistory<S> history;
  /// Final V, the candidate for ⋂ V_k.
  typename S::Open last;
  /// The last two replies agree.
  bool stabilized = false;
  /// Decided for finite spaces (a decreasing chain of nonempty opens there is
  /// eventually constant and nonempty); unset for the Baire model, where only
  /// "II alive after the played rounds" is known.
  std::optional<bool> ii_wins;
};

/// Plays `rounds` rounds, checking each move. Throws IllegalMove naming the
/// offending player.
template <SpaceModel S>
GameOutcome<S> run_game(std::shared_ptr<const S> space, const StrategyI<S>& one,
                        const StrategyII<S>& two, std::size_t rounds) {
  if (rounds == 0) throw ConfigError("a game needs at least one round");
  GameOutcome<S> out;
  auto& s = out.history;
  for (std::size_t k = 0; k < rounds; ++k) {
    auto u = one(s);
    if (space->is_empty(u)) throw IllegalMove(Player::I, k, "empty move");
    if (k > 0 && !space->subset(u, s.back().v)) {
      throw IllegalMove(Player::I, k, "move is not inside II's previous reply");
    }
    auto v = two(s, u);
    if (space->is_empty(v)) throw IllegalMove(Player::II, k, "empty reply");
    if (!space->subset(v, u)) throw IllegalMove(Player::II, k, "reply is not inside I's move");
    s.push_back({std::move(u), std::move(v)});
  }
  out.last = s.back().v;
  out.stabilized = s.size() >= 2 && space->equal(s[s.size() - 2].v, s.back().v);
  if constexpr (std::is_same_v<S, FiniteSpaceModel>) out.ii_wins = true;
  return out;
}

/// [{"player": "I"|"II", "set": rendered}, …]
template <SpaceModel S>
nlohmann::json transcript_json(const S& space, const GameHistory<S>& s) {
  auto out = nlohmann::json::array();
  for (const auto& r : s) {
    out.push_back({{"player", "I"}, {"set", space.render(r.u)}});
    out.push_back({{"player", "II"}, {"set", space.render(r.v)}});
  }
  return out;
}

/// Schemes U, V built from Γ′: U_ε = X, V_ε = Γ′(⟨⟩, X), U_{a⌢m} is the m-th
/// π-base element of V_a and V_{a⌢m} = Γ′(history along a, U_{a⌢m}).
template <SpaceModel S>
class Extraction {
 public:
  using Open = typename S::Open;

  Extraction(std::shared_ptr<const S> space, StrategyII<S> gamma)
      : state_(std::make_shared<State>()) {
    state_->space = space;
    state_->modified = modify_strategy(space, std::move(gamma));
  }

  const Round<S>& pair(const FinSeq& a) const { return state_->pair(a); }

  Scheme<S> u_scheme() const {
    auto st = state_;
    return Scheme<S>(st->space, [st](const FinSeq& a) { return st->pair(a).u; });
  }
  Scheme<S> v_scheme() const {
    auto st = state_;
    return Scheme<S>(st->space, [st](const FinSeq& a) { return st->pair(a).v; });
  }

  /// ⟨⟨U_{a↾0},V_{a↾0}⟩, …, ⟨U_a,V_a⟩⟩.
  GameHistory<S> history(const FinSeq& a) const {
    GameHistory<S> out;
    for (std::size_t k = 0; k <= a.size(); ++k) out.push_back(pair(restrict(a, k)));
    return out;
  }

  const StrategyII<S>& modified() const { return state_->modified; }

 private:
  struct State {
    std::shared_ptr<const S> space;
    StrategyII<S> modified;
    std::mutex mu;
    std::map<FinSeq, Round<S>> memo;

    const Round<S>& pair(const FinSeq& a) {
      {
        std::lock_guard lock(mu);
        if (auto it = memo.find(a); it != memo.end()) return it->second;
      }
      Round<S> value;
      if (a.empty()) {
        value.u = space->whole();
        value.v = modified({}, value.u);
      } else {
        GameHistory<S> s;
        for (std::size_t k = 0; k < a.size(); ++k) s.push_back(pair(restrict(a, k)));
        value.u = space->pi_base(s.back().v, a.back());
        value.v = modified(s, value.u);
      }
      if (space->is_empty(value.v) || !space->subset(value.v, value.u)) {
        throw IllegalMove(Player::II, a.size(), "extraction at node " + to_string(a));
      }
      std::lock_guard lock(mu);
      return memo.emplace(a, std::move(value)).first->second;
    }
  };
  std::shared_ptr<State> state_;
};

template <SpaceModel S>
Extraction<S> extract_schemes(std::shared_ptr<const S> space, StrategyII<S> gamma) {
  return Extraction<S>(std::move(space), std::move(gamma));
}

/// Replays each window node a as a fresh game of Γ′ against pi_base_player(a)
/// and compares it with the recorded branch history.
template <SpaceModel S>
Report branch_replay_check(const Extraction<S>& ex, std::shared_ptr<const S> space,
                           StrategyII<S> gamma, const Window& w) {
  Report r{"branch-replay", {}};
  const auto fresh = modify_strategy(space, std::move(gamma));
  for_each_node(w, [&](const FinSeq& a) {
    const auto game = run_game(space, pi_base_player(space, a), fresh, a.size() + 1);
    const auto recorded = ex.history(a);
    bool same = true;
    for (std::size_t k = 0; k < recorded.size(); ++k) {
      same = same && space->equal(game.history[k].u, recorded[k].u) &&
             space->equal(game.history[k].v, recorded[k].v);
    }
    r.add("replay", a, same ? Status::Verified : Status::Violated);
  });
  return r;
}

/// For each window node a and each nonempty open u ⊆ V_a in `samples`, some
/// child U_{a⌢m} with m < budget lies inside u.
template <SpaceModel S>
Report child_pi_base_check(const Extraction<S>& ex, const S& space,
                           const std::vector<typename S::Open>& samples, Nat budget,
                           const Window& w) {
  Report r{"child-pi-base", {}};
  for_each_node(w, [&](const FinSeq& a) {
    const auto& va = ex.pair(a).v;
    for (const auto& u : samples) {
      if (space.is_empty(u) || !space.subset(u, va)) continue;
      bool hit = false;
      for (Nat m = 0; m < budget && !hit; ++m) hit = space.subset(ex.pair(a.append(m)).u, u);
      r.add("pi-base-sample", a, hit ? Status::Verified : Status::Violated,
            hit ? "" : "no child inside " + nlohmann::json(space.render(u)).dump());
    }
  });
  return r;
}

}  // namespace pispace
