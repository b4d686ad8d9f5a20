#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pispace/seq.hpp"

namespace pispace {

/// A finite boolean combination of basic clopen cylinders S_a of the Baire
/// space. Values are immutable and share subtrees.
class CylExpr {
 public:
  enum class Op { Empty, Full, Atom, Union, Intersection, Difference };

  /// Default-constructed expressions are Empty.
  CylExpr();

  static CylExpr empty();
  static CylExpr full();
  static CylExpr atom(FinSeq a);

  friend CylExpr operator|(const CylExpr& a, const CylExpr& b);
  friend CylExpr operator&(const CylExpr& a, const CylExpr& b);
  friend CylExpr operator-(const CylExpr& a, const CylExpr& b);

  Op op() const;
  /// Atom sequence; only meaningful for Op::Atom.
  const FinSeq& seq() const;
  const CylExpr& lhs() const;
  const CylExpr& rhs() const;

  /// Distinct atom sequences, in short-lex order.
  std::vector<FinSeq> mentions() const;
  std::size_t max_mention_length() const;

  /// Evaluates the boolean formula with each atom decided by `holds`.
  bool evaluate(const std::function<bool(const FinSeq&)>& holds) const;

  /// Structural identity (not semantic equality, see `equal`).
  friend bool structurally_equal(const CylExpr& a, const CylExpr& b);

 private:
  struct Node;
  explicit CylExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

bool is_empty(const CylExpr& e);
bool subset(const CylExpr& a, const CylExpr& b);
bool equal(const CylExpr& a, const CylExpr& b);
bool intersects(const CylExpr& a, const CylExpr& b);
bool contains_branch(const CylExpr& e, const BranchRule& p);

/// Smallest v >= floor such that no mention of length > position has entry v
/// at that position.
Nat fresh_value(const std::vector<FinSeq>& mentions, std::size_t position, Nat floor = 0);

/// A w with S_w ⊆ e, or nullopt iff e is empty. The witness is the maximum
/// of the first satisfying membership chain (short-lex) extended by the
/// smallest fresh value >= floor.
std::optional<FinSeq> witness_cylinder(const CylExpr& e, Nat floor = 0);

/// A c with S_c ⊆ e and S_c ≠ e.
std::optional<FinSeq> strict_witness(const CylExpr& e);

/// The longest c with e ⊆ S_c. Throws EmptySetError for empty e.
FinSeq common_stem(const CylExpr& e);

/// Whether e equals a single cylinder S_c; returns that c.
std::optional<FinSeq> as_single_cylinder(const CylExpr& e);

/// Finite description of a (possibly infinite) antichain of finite sequences:
/// explicit members plus families {stem⌢j : j ∉ excluded}.
struct LazyAntichain {
  struct Family {
    FinSeq stem;
    std::set<Nat> excluded;
    friend bool operator==(const Family&, const Family&) = default;
  };

  std::vector<FinSeq> members;
  std::vector<Family> families;

  bool finite() const { return families.empty(); }
  /// Fair bijective enumeration: explicit members first, then families
  /// interleaved round-robin. nullopt past the end of a finite antichain.
  std::optional<FinSeq> member(Nat n) const;
  bool contains(const FinSeq& c) const;
};

/// The minimal cylinders inside e: {c : S_c ⊆ e and S_{parent(c)} ⊄ e}.
/// Throws EmptySetError when e is empty.
LazyAntichain minimal_antichain(const CylExpr& e);

/// A downward-closed tree T ⊆ ω^{<ω} whose nodes a⌢j all satisfy j < bound.
/// Its branch set [T] is closed and nowhere dense.
struct NDTree {
  std::function<bool(const FinSeq&)> contains;
  Nat branching_bound = 1;
  std::size_t inspection_depth = 4;

  /// Checks downward closure and the branching bound over all sequences with
  /// entries <= alphabet up to the inspection depth.
  bool well_formed(Nat alphabet) const;
};

/// A c with S_c ⊆ u and S_c ∩ [tree] = ∅. Throws EmptySetError for empty u.
FinSeq nd_witness(const CylExpr& u, const NDTree& tree);

/// All length-d sequences over {0, …, b} (b standing for every fresh value)
/// satisfying e. Requires every mention to have entries < b and length <= d.
std::set<FinSeq> trace_window(const CylExpr& e, std::size_t d, Nat b);

// Text grammar: S(n1,...,nk) atoms, S() = full, 0 = empty, operators
// & (tightest), \, | (loosest), all left-associative, parentheses.
CylExpr parse_expr(std::string_view text);
std::string to_string(const CylExpr& e);
std::ostream& operator<<(std::ostream& os, const CylExpr& e);

void to_json(nlohmann::json& j, const CylExpr& e);
void from_json(const nlohmann::json& j, CylExpr& e);

}  // namespace pispace
