#include "pispace/cylinder.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "pispace/error.hpp"

namespace pispace {

struct CylExpr::Node {
  Op op = Op::Empty;
  FinSeq seq;
  CylExpr lhs_expr;
  CylExpr rhs_expr;

  explicit Node(Op o) : op(o), lhs_expr(nullptr), rhs_expr(nullptr) {}
};

CylExpr::CylExpr() : CylExpr(empty()) {}

CylExpr::CylExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

CylExpr CylExpr::empty() {
  static const auto node = std::make_shared<const Node>(Op::Empty);
  return CylExpr(node);
}

CylExpr CylExpr::full() {
  static const auto node = std::make_shared<const Node>(Op::Full);
  return CylExpr(node);
}

CylExpr CylExpr::atom(FinSeq a) {
  auto node = std::make_shared<Node>(Op::Atom);
  node->seq = std::move(a);
  return CylExpr(std::move(node));
}

namespace {

CylExpr::Op binary_op_error() { throw ValidationError("not a binary expression"); }

}  // namespace

CylExpr operator|(const CylExpr& a, const CylExpr& b) {
  auto node = std::make_shared<CylExpr::Node>(CylExpr::Op::Union);
  node->lhs_expr = a;
  node->rhs_expr = b;
  return CylExpr(std::move(node));
}

CylExpr operator&(const CylExpr& a, const CylExpr& b) {
  auto node = std::make_shared<CylExpr::Node>(CylExpr::Op::Intersection);
  node->lhs_expr = a;
  node->rhs_expr = b;
  return CylExpr(std::move(node));
}

CylExpr operator-(const CylExpr& a, const CylExpr& b) {
  auto node = std::make_shared<CylExpr::Node>(CylExpr::Op::Difference);
  node->lhs_expr = a;
  node->rhs_expr = b;
  return CylExpr(std::move(node));
}

CylExpr::Op CylExpr::op() const { return node_->op; }
const FinSeq& CylExpr::seq() const { return node_->seq; }

const CylExpr& CylExpr::lhs() const {
  if (node_->op < Op::Union) binary_op_error();
  return node_->lhs_expr;
}

const CylExpr& CylExpr::rhs() const {
  if (node_->op < Op::Union) binary_op_error();
  return node_->rhs_expr;
}

namespace {

void collect_mentions(const CylExpr& e, std::set<FinSeq, ShortLex>& out) {
  switch (e.op()) {
    case CylExpr::Op::Empty:
    case CylExpr::Op::Full:
      return;
    case CylExpr::Op::Atom:
      out.insert(e.seq());
      return;
    default:
      collect_mentions(e.lhs(), out);
      collect_mentions(e.rhs(), out);
  }
}

}  // namespace

std::vector<FinSeq> CylExpr::mentions() const {
  std::set<FinSeq, ShortLex> out;
  collect_mentions(*this, out);
  return {out.begin(), out.end()};
}

std::size_t CylExpr::max_mention_length() const {
  std::size_t len = 0;
  for (const auto& m : mentions()) len = std::max(len, m.size());
  return len;
}

bool CylExpr::evaluate(const std::function<bool(const FinSeq&)>& holds) const {
  switch (op()) {
    case Op::Empty:
      return false;
    case Op::Full:
      return true;
    case Op::Atom:
      return holds(seq());
    case Op::Union:
      return lhs().evaluate(holds) || rhs().evaluate(holds);
    case Op::Intersection:
      return lhs().evaluate(holds) && rhs().evaluate(holds);
    case Op::Difference:
      return lhs().evaluate(holds) && !rhs().evaluate(holds);
  }
  return false;
}

bool structurally_equal(const CylExpr& a, const CylExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case CylExpr::Op::Empty:
    case CylExpr::Op::Full:
      return true;
    case CylExpr::Op::Atom:
      return a.seq() == b.seq();
    default:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  }
}

// ---------------------------------------------------------------------------
// Decision procedure.
//
// The set of mentions lying below a branch p is a ⊑-chain closed downward
// inside the mention set M. Writing m for its maximum (⟨⟩ when the chain is
// empty), the chain is exactly {a ∈ M : a ⊑ m}. Every m ∈ M ∪ {⟨⟩} is
// realised by extending m with a value fresh at position lh(m), so the
// satisfying branch types of an expression are decided by |M| + 1 formula
// evaluations.

namespace {

std::vector<FinSeq> chain_tops(const std::vector<FinSeq>& mentions) {
  std::vector<FinSeq> tops;
  tops.reserve(mentions.size() + 1);
  tops.emplace_back();
  for (const auto& m : mentions) {
    if (!m.empty()) tops.push_back(m);
  }
  return tops;
}

bool chain_satisfies(const CylExpr& e, const FinSeq& top) {
  return e.evaluate([&](const FinSeq& a) { return is_prefix(a, top); });
}

std::optional<FinSeq> first_satisfying_top(const CylExpr& e,
                                           const std::vector<FinSeq>& mentions) {
  for (const auto& top : chain_tops(mentions)) {
    if (chain_satisfies(e, top)) return top;
  }
  return std::nullopt;
}

}  // namespace

Nat fresh_value(const std::vector<FinSeq>& mentions, std::size_t position, Nat floor) {
  std::set<Nat> used;
  for (const auto& m : mentions) {
    if (m.size() > position) used.insert(m[position]);
  }
  Nat v = floor;
  while (used.contains(v)) ++v;
  return v;
}

bool is_empty(const CylExpr& e) { return !first_satisfying_top(e, e.mentions()).has_value(); }

bool subset(const CylExpr& a, const CylExpr& b) { return is_empty(a - b); }

bool equal(const CylExpr& a, const CylExpr& b) { return subset(a, b) && subset(b, a); }

bool intersects(const CylExpr& a, const CylExpr& b) { return !is_empty(a & b); }

bool contains_branch(const CylExpr& e, const BranchRule& p) {
  return e.evaluate([&](const FinSeq& a) { return is_prefix(a, p); });
}

std::optional<FinSeq> witness_cylinder(const CylExpr& e, Nat floor) {
  const auto mentions = e.mentions();
  auto top = first_satisfying_top(e, mentions);
  if (!top) return std::nullopt;
  return top->append(fresh_value(mentions, top->size(), floor));
}

std::optional<FinSeq> strict_witness(const CylExpr& e) {
  auto w = witness_cylinder(e);
  if (!w) return std::nullopt;
  return w->append(0);
}

FinSeq common_stem(const CylExpr& e) {
  auto w = witness_cylinder(e);
  if (!w) throw EmptySetError("common_stem of an empty expression");
  for (std::size_t len = w->size() + 1; len-- > 0;) {
    auto c = restrict(*w, len);
    if (subset(e, CylExpr::atom(c))) return c;
  }
  return {};
}

std::optional<FinSeq> as_single_cylinder(const CylExpr& e) {
  if (is_empty(e)) return std::nullopt;
  auto c = common_stem(e);
  if (equal(e, CylExpr::atom(c))) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

Nat nth_not_excluded(Nat index, const std::set<Nat>& excluded) {
  Nat v = index;
  for (auto x : excluded) {
    if (x <= v) {
      ++v;
    } else {
      break;
    }
  }
  return v;
}

}  // namespace

std::optional<FinSeq> LazyAntichain::member(Nat n) const {
  if (n < members.size()) return members[n];
  if (families.empty()) return std::nullopt;
  const Nat k = n - members.size();
  const auto& fam = families[k % families.size()];
  return fam.stem.append(nth_not_excluded(k / families.size(), fam.excluded));
}

bool LazyAntichain::contains(const FinSeq& c) const {
  if (std::find(members.begin(), members.end(), c) != members.end()) return true;
  if (c.empty()) return false;
  const auto stem = c.parent();
  return std::any_of(families.begin(), families.end(), [&](const Family& f) {
    return f.stem == stem && !f.excluded.contains(c.back());
  });
}

namespace {

void descend(const CylExpr& e, const std::vector<FinSeq>& mentions, const FinSeq& c,
             LazyAntichain& out) {
  const auto cyl = CylExpr::atom(c);
  if (subset(cyl, e)) {
    out.members.push_back(c);
    return;
  }
  if (!intersects(cyl, e)) return;

  // Children c⌢v for values v named by mentions strictly above c are
  // inspected one by one; all other children carry the same type.
  std::set<Nat> named;
  for (const auto& m : mentions) {
    if (m.size() > c.size() && is_prefix(c, m)) named.insert(m[c.size()]);
  }
  for (auto v : named) descend(e, mentions, c.append(v), out);

  const Nat rep = nth_not_excluded(0, named);
  if (subset(CylExpr::atom(c.append(rep)), e)) {
    out.families.push_back({c, named});
  }
}

}  // namespace

LazyAntichain minimal_antichain(const CylExpr& e) {
  if (is_empty(e)) throw EmptySetError("minimal_antichain of an empty expression");
  LazyAntichain out;
  descend(e, e.mentions(), FinSeq{}, out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Visit>
void for_each_word(std::size_t len, Nat alphabet_max, std::vector<Nat>& buf, const Visit& visit) {
  if (buf.size() == len) {
    visit(FinSeq(buf));
    return;
  }
  for (Nat v = 0; v <= alphabet_max; ++v) {
    buf.push_back(v);
    for_each_word(len, alphabet_max, buf, visit);
    buf.pop_back();
  }
}

}  // namespace

bool NDTree::well_formed(Nat alphabet) const {
  bool ok = true;
  std::vector<Nat> buf;
  for (std::size_t len = 1; len <= inspection_depth && ok; ++len) {
    for_each_word(len, alphabet, buf, [&](const FinSeq& s) {
      if (!contains(s)) return;
      if (s.back() >= branching_bound || !contains(s.parent())) ok = false;
    });
  }
  return ok;
}

FinSeq nd_witness(const CylExpr& u, const NDTree& tree) {
  // The witness ends with a value >= the branching bound, so it lies outside
  // the tree and, by downward closure, so does every extension of it.
  auto w = witness_cylinder(u, tree.branching_bound);
  if (!w) throw EmptySetError("nd_witness needs a nonempty open set");
  return *w;
}

std::set<FinSeq> trace_window(const CylExpr& e, std::size_t d, Nat b) {
  for (const auto& m : e.mentions()) {
    if (m.size() > d) {
      throw WindowError("mention " + to_string(m) + " longer than window depth " +
                        std::to_string(d));
    }
    for (auto v : m) {
      if (v >= b) {
        throw WindowError("mention " + to_string(m) + " has an entry >= window breadth " +
                          std::to_string(b));
      }
    }
  }
  std::set<FinSeq> out;
  std::vector<Nat> buf;
  for_each_word(d, b, buf, [&](const FinSeq& s) {
    if (e.evaluate([&](const FinSeq& a) { return is_prefix(a, s); })) out.insert(s);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text grammar.

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  CylExpr parse() {
    auto e = parse_union();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  CylExpr parse_union() {
    auto e = parse_difference();
    while (accept('|')) e = e | parse_difference();
    return e;
  }

  CylExpr parse_difference() {
    auto e = parse_intersection();
    while (accept('\\')) e = e - parse_intersection();
    return e;
  }

  CylExpr parse_intersection() {
    auto e = parse_primary();
    while (accept('&')) e = e & parse_primary();
    return e;
  }

  CylExpr parse_primary() {
    skip_ws();
    if (accept('(')) {
      auto e = parse_union();
      expect(')');
      return e;
    }
    if (accept('0')) return CylExpr::empty();
    if (accept('S')) {
      expect('(');
      std::vector<Nat> entries;
      if (!accept(')')) {
        do {
          entries.push_back(parse_nat());
        } while (accept(','));
        expect(')');
      }
      if (entries.empty()) return CylExpr::full();
      return CylExpr::atom(FinSeq(std::move(entries)));
    }
    fail(pos_ < text_.size() ? "unexpected character '" + std::string(1, text_[pos_]) + "'"
                             : "unexpected end of input");
  }

  Nat parse_nat() {
    skip_ws();
    const auto start = pos_;
    Nat value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<Nat>(text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) fail("expected a natural");
    return value;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(CylExpr::Op op) {
  switch (op) {
    case CylExpr::Op::Union:
      return 1;
    case CylExpr::Op::Difference:
      return 2;
    case CylExpr::Op::Intersection:
      return 3;
    default:
      return 4;
  }
}

void write(std::ostream& os, const CylExpr& e, int min_prec) {
  const int prec = precedence(e.op());
  const bool parens = prec < min_prec;
  if (parens) os << '(';
  switch (e.op()) {
    case CylExpr::Op::Empty:
      os << '0';
      break;
    case CylExpr::Op::Full:
      os << "S()";
      break;
    case CylExpr::Op::Atom: {
      os << "S(";
      for (std::size_t i = 0; i < e.seq().size(); ++i) {
        if (i) os << ',';
        os << e.seq()[i];
      }
      os << ')';
      break;
    }
    default: {
      const char sym = e.op() == CylExpr::Op::Union          ? '|'
                       : e.op() == CylExpr::Op::Intersection ? '&'
                                                             : '\\';
      write(os, e.lhs(), prec);
      os << ' ' << sym << ' ';
      write(os, e.rhs(), prec + 1);
    }
  }
  if (parens) os << ')';
}

}  // namespace

CylExpr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const CylExpr& e) {
  std::ostringstream os;
  write(os, e, 0);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CylExpr& e) {
  write(os, e, 0);
  return os;
}

void to_json(nlohmann::json& j, const CylExpr& e) {
  switch (e.op()) {
    case CylExpr::Op::Empty:
      j = {{"op", "empty"}, {"args", nlohmann::json::array()}};
      return;
    case CylExpr::Op::Full:
      j = {{"op", "full"}, {"args", nlohmann::json::array()}};
      return;
    case CylExpr::Op::Atom:
      j = {{"op", "atom"}, {"args", e.seq()}};
      return;
    case CylExpr::Op::Union:
      j = {{"op", "union"}, {"args", {e.lhs(), e.rhs()}}};
      return;
    case CylExpr::Op::Intersection:
      j = {{"op", "intersection"}, {"args", {e.lhs(), e.rhs()}}};
      return;
    case CylExpr::Op::Difference:
      j = {{"op", "difference"}, {"args", {e.lhs(), e.rhs()}}};
      return;
  }
}

void from_json(const nlohmann::json& j, CylExpr& e) {
  if (!j.is_object() || !j.contains("op") || !j.contains("args") || !j["args"].is_array()) {
    throw ParseError("expression JSON must be an object with op and args", 0);
  }
  const auto op = j["op"].get<std::string>();
  const auto& args = j["args"];
  if (op == "empty") {
    e = CylExpr::empty();
  } else if (op == "full") {
    e = CylExpr::full();
  } else if (op == "atom") {
    e = CylExpr::atom(args.get<FinSeq>());
  } else if (op == "union" || op == "intersection" || op == "difference") {
    if (args.size() != 2) throw ParseError("binary op '" + op + "' needs two args", 0);
    const auto a = args[0].get<CylExpr>();
    const auto b = args[1].get<CylExpr>();
    e = op == "union" ? (a | b) : op == "intersection" ? (a & b) : (a - b);
  } else {
    throw ParseError("unknown op '" + op + "'", 0);
  }
}

}  // namespace pispace
