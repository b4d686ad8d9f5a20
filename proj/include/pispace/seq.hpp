#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pispace {

using Nat = std::uint64_t;

/// Finite sequence of naturals. Immutable once built; every operation returns
/// a new value.
class FinSeq {
 public:
  FinSeq() = default;
  FinSeq(std::initializer_list<Nat> entries) : entries_(entries) {}
  explicit FinSeq(std::vector<Nat> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Nat operator[](std::size_t i) const { return entries_[i]; }
  Nat at(std::size_t i) const;
  Nat back() const { return entries_.back(); }

  std::span<const Nat> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// s⌢x
  FinSeq append(Nat x) const;
  /// s with its last entry removed; the empty sequence has no parent.
  FinSeq parent() const;

  friend bool operator==(const FinSeq&, const FinSeq&) = default;
  friend auto operator<=>(const FinSeq& a, const FinSeq& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::vector<Nat> entries_;
};

/// Orders first by length, then lexicographically.
struct ShortLex {
  bool operator()(const FinSeq& a, const FinSeq& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// A total rule ω → ω standing for an infinite branch. Only finite prefixes
/// are ever inspected; there is deliberately no equality operator.
class BranchRule {
 public:
  using Rule = std::function<Nat(Nat)>;

  explicit BranchRule(Rule rule) : rule_(std::move(rule)) {}

  static BranchRule constant(Nat value);
  /// prefix followed by the constant tail value
  static BranchRule eventually_constant(FinSeq prefix, Nat tail);
  /// prefix followed by `period` repeated forever; period must be nonempty
  static BranchRule eventually_periodic(FinSeq prefix, FinSeq period);

  Nat operator()(Nat n) const { return rule_(n); }

  /// The branch n ↦ g(p(n)).
  BranchRule mapped(std::function<Nat(Nat)> g) const;

 private:
  Rule rule_;
};

FinSeq concat(const FinSeq& s, const FinSeq& t);

/// First n entries; throws RangeError when n > lh(s).
FinSeq restrict(const FinSeq& s, std::size_t n);
FinSeq restrict(const BranchRule& p, std::size_t n);

bool is_prefix(const FinSeq& s, const FinSeq& t);
bool is_prefix(const FinSeq& s, const BranchRule& p);
bool comparable(const FinSeq& s, const FinSeq& t);

/// Whether two branches agree on their first `depth` entries.
bool agree_to_depth(const BranchRule& p, const BranchRule& q, std::size_t depth);

/// g∘a, entrywise.
FinSeq compose(const std::function<Nat(Nat)>& g, const FinSeq& a);

/// Dot-separated naturals, "ε" for the empty sequence.
std::string to_string(const FinSeq& s);
FinSeq parse_finseq(std::string_view text);
std::ostream& operator<<(std::ostream& os, const FinSeq& s);

void to_json(nlohmann::json& j, const FinSeq& s);
void from_json(const nlohmann::json& j, FinSeq& s);

/// Canonical bijections between ω and ω×ω, ω^k and ω^{<ω}. Used wherever a
/// countable family has to be enumerated fairly.
namespace diagonal {

/// Cantor pairing: (i + j)(i + j + 1)/2 + j.
Nat pair(Nat i, Nat j);
std::pair<Nat, Nat> unpair(Nat n);

/// Bijection ω → ω^len (len ≥ 1 uses iterated pairing; len 0 maps 0 to ⟨⟩).
FinSeq tuple(Nat n, std::size_t len);
Nat tuple_index(const FinSeq& t);

/// Bijection ω → ω^{<ω}; 0 ↦ ⟨⟩.
FinSeq finseq(Nat n);
Nat finseq_index(const FinSeq& s);

}  // namespace diagonal

}  // namespace pispace

template <>
struct std::hash<pispace::FinSeq> {
  std::size_t operator()(const pispace::FinSeq& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : s) {
      h ^= std::hash<pispace::Nat>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h ^ s.size();
  }
};
