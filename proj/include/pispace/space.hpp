#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "pispace/cylinder.hpp"
#include "pispace/seq.hpp"

namespace pispace {

/// Finite verification surface: nodes of length <= depth whose entries are
/// all < breadth. The breadth doubles as the child budget.
struct Window {
  std::size_t depth = 0;
  Nat breadth = 0;

  /// A window without children to inspect.
  bool empty() const { return breadth == 0; }
};

/// Visits window nodes in depth-first, lexicographic order.
template <class F>
void for_each_node(const Window& w, F&& visit) {
  if (w.empty()) return;
  std::vector<Nat> buf;
  auto rec = [&](auto&& self) -> void {
    visit(FinSeq(buf));
    if (buf.size() == w.depth) return;
    for (Nat v = 0; v < w.breadth; ++v) {
      buf.push_back(v);
      self(self);
      buf.pop_back();
    }
  };
  rec(rec);
}

/// Abstract topology used by schemes and games. Open sets are values; the
/// π-base enumeration of a nonempty open O is fair and total, its element 0
/// is O itself and every element is a nonempty open subset of O.
template <class S>
concept SpaceModel = requires(const S& s, const typename S::Open& o, const typename S::Point& x,
                              Nat m) {
  { s.whole() } -> std::convertible_to<typename S::Open>;
  { s.is_empty(o) } -> std::same_as<bool>;
  { s.intersect(o, o) } -> std::convertible_to<typename S::Open>;
  { s.unite(o, o) } -> std::convertible_to<typename S::Open>;
  { s.subset(o, o) } -> std::same_as<bool>;
  { s.equal(o, o) } -> std::same_as<bool>;
  { s.contains(o, x) } -> std::same_as<bool>;
  { s.pi_base(o, m) } -> std::convertible_to<typename S::Open>;
  { s.render(o) } -> std::convertible_to<nlohmann::json>;
  { S::kName } -> std::convertible_to<const char*>;
};

/// Subset of a ≤ 64-point set.
struct PointSet {
  std::uint64_t bits = 0;

  static PointSet of(std::initializer_list<std::size_t> points);
  bool contains(std::size_t p) const { return (bits >> p) & 1U; }
  bool empty() const { return bits == 0; }
  int size() const { return std::popcount(bits); }

  friend PointSet operator|(PointSet a, PointSet b) { return {a.bits | b.bits}; }
  friend PointSet operator&(PointSet a, PointSet b) { return {a.bits & b.bits}; }
  friend PointSet operator-(PointSet a, PointSet b) { return {a.bits & ~b.bits}; }
  friend bool operator==(PointSet, PointSet) = default;
  friend auto operator<=>(PointSet, PointSet) = default;
};

/// An explicit finite topology. Closure under union and intersection is
/// verified at construction.
class FiniteSpaceModel {
 public:
  using Open = PointSet;
  using Point = std::size_t;
  static constexpr const char* kName = "finite";

  /// Throws ValidationError when the family is not a topology.
  FiniteSpaceModel(std::vector<std::string> labels, std::vector<PointSet> opens);

  static FiniteSpaceModel sierpinski();
  static FiniteSpaceModel discrete(std::size_t n);
  static FiniteSpaceModel indiscrete(std::size_t n);
  /// Every topology on {0, …, n−1}; n <= 4.
  static std::vector<FiniteSpaceModel> all_topologies(std::size_t n);

  static FiniteSpaceModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t point_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Sorted ascending by bit pattern.
  const std::vector<PointSet>& opens() const { return opens_; }
  bool is_open(PointSet o) const;
  /// Nonempty open subsets of o, with o first when o is open.
  std::vector<PointSet> opens_below(PointSet o) const;

  PointSet whole() const { return whole_; }
  bool is_empty(PointSet o) const { return o.empty(); }
  PointSet intersect(PointSet a, PointSet b) const { return a & b; }
  PointSet unite(PointSet a, PointSet b) const { return a | b; }
  bool subset(PointSet a, PointSet b) const { return (a - b).empty(); }
  bool equal(PointSet a, PointSet b) const { return a == b; }
  bool contains(PointSet o, std::size_t x) const { return o.contains(x); }
  /// Cycles through opens_below(o). Throws EmptySetError for empty o.
  PointSet pi_base(PointSet o, Nat m) const;
  nlohmann::json render(PointSet o) const;
  /// Parses a JSON list of labels.
  PointSet parse_set(const nlohmann::json& j) const;

 private:
  std::vector<std::string> labels_;
  std::vector<PointSet> opens_;
  PointSet whole_;
};

/// The Baire space with opens given as cylinder expressions.
class BaireSpaceModel {
 public:
  using Open = CylExpr;
  using Point = BranchRule;
  static constexpr const char* kName = "baire";

  CylExpr whole() const { return CylExpr::full(); }
  bool is_empty(const CylExpr& o) const { return pispace::is_empty(o); }
  CylExpr intersect(const CylExpr& a, const CylExpr& b) const { return a & b; }
  CylExpr unite(const CylExpr& a, const CylExpr& b) const { return a | b; }
  bool subset(const CylExpr& a, const CylExpr& b) const { return pispace::subset(a, b); }
  bool equal(const CylExpr& a, const CylExpr& b) const { return pispace::equal(a, b); }
  bool contains(const CylExpr& o, const BranchRule& x) const { return contains_branch(o, x); }
  /// Element 0 is o; element m >= 1 is S_{c⌢d} for the pair (c, d) with index
  /// m − 1, c ranging over the minimal antichain of o and d over nonempty
  /// finite sequences. Throws EmptySetError for empty o.
  CylExpr pi_base(const CylExpr& o, Nat m) const;
  nlohmann::json render(const CylExpr& o) const { return to_string(o); }

 private:
  const LazyAntichain& antichain_of(const CylExpr& o) const;

  mutable std::mutex mu_;
  mutable std::map<std::string, LazyAntichain> antichains_;
};

static_assert(SpaceModel<FiniteSpaceModel>);
static_assert(SpaceModel<BaireSpaceModel>);

}  // namespace pispace
