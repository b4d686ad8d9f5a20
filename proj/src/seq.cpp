#include "pispace/seq.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "pispace/error.hpp"

namespace pispace {

Nat FinSeq::at(std::size_t i) const {
  if (i >= entries_.size()) {
    throw RangeError("index " + std::to_string(i) + " outside sequence of length " +
                     std::to_string(entries_.size()));
  }
  return entries_[i];
}

FinSeq FinSeq::append(Nat x) const {
  auto out = entries_;
  out.push_back(x);
  return FinSeq(std::move(out));
}

FinSeq FinSeq::parent() const {
  if (entries_.empty()) throw RangeError("the empty sequence has no parent");
  return FinSeq(std::vector<Nat>(entries_.begin(), entries_.end() - 1));
}

BranchRule BranchRule::constant(Nat value) {
  return BranchRule([value](Nat) { return value; });
}

BranchRule BranchRule::eventually_constant(FinSeq prefix, Nat tail) {
  return BranchRule([prefix = std::move(prefix), tail](Nat n) {
    return n < prefix.size() ? prefix[n] : tail;
  });
}

BranchRule BranchRule::eventually_periodic(FinSeq prefix, FinSeq period) {
  if (period.empty()) throw RangeError("eventually_periodic needs a nonempty period");
  return BranchRule([prefix = std::move(prefix), period = std::move(period)](Nat n) {
    if (n < prefix.size()) return prefix[n];
    return period[(n - prefix.size()) % period.size()];
  });
}

BranchRule BranchRule::mapped(std::function<Nat(Nat)> g) const {
  return BranchRule([rule = rule_, g = std::move(g)](Nat n) { return g(rule(n)); });
}

FinSeq concat(const FinSeq& s, const FinSeq& t) {
  std::vector<Nat> out(s.begin(), s.end());
  out.insert(out.end(), t.begin(), t.end());
  return FinSeq(std::move(out));
}

FinSeq restrict(const FinSeq& s, std::size_t n) {
  if (n > s.size()) {
    throw RangeError("cannot restrict a sequence of length " + std::to_string(s.size()) +
                     " to " + std::to_string(n));
  }
  return FinSeq(std::vector<Nat>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n)));
}

FinSeq restrict(const BranchRule& p, std::size_t n) {
  std::vector<Nat> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(p(i));
  return FinSeq(std::move(out));
}

bool is_prefix(const FinSeq& s, const FinSeq& t) {
  if (s.size() > t.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != t[i]) return false;
  }
  return true;
}

bool is_prefix(const FinSeq& s, const BranchRule& p) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != p(i)) return false;
  }
  return true;
}

bool comparable(const FinSeq& s, const FinSeq& t) { return is_prefix(s, t) || is_prefix(t, s); }

bool agree_to_depth(const BranchRule& p, const BranchRule& q, std::size_t depth) {
  for (std::size_t i = 0; i < depth; ++i) {
    if (p(i) != q(i)) return false;
  }
  return true;
}

FinSeq compose(const std::function<Nat(Nat)>& g, const FinSeq& a) {
  std::vector<Nat> out;
  out.reserve(a.size());
  for (auto v : a) out.push_back(g(v));
  return FinSeq(std::move(out));
}

std::string to_string(const FinSeq& s) {
  if (s.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(s[i]);
  }
  return out;
}

FinSeq parse_finseq(std::string_view text) {
  if (text == "ε" || text.empty()) return {};
  std::vector<Nat> out;
  std::size_t pos = 0;
  while (true) {
    Nat value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + pos) {
      throw ParseError("expected a natural in sequence text", pos);
    }
    out.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    if (pos == text.size()) break;
    if (text[pos] != '.') throw ParseError("expected '.' in sequence text", pos);
    ++pos;
  }
  return FinSeq(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const FinSeq& s) { return os << to_string(s); }

void to_json(nlohmann::json& j, const FinSeq& s) {
  j = nlohmann::json::array();
  for (auto v : s) j.push_back(v);
}

void from_json(const nlohmann::json& j, FinSeq& s) {
  if (!j.is_array()) throw ParseError("sequence JSON must be an array of naturals", 0);
  std::vector<Nat> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ParseError("sequence JSON entries must be naturals", out.size());
    }
    out.push_back(v.get<Nat>());
  }
  s = FinSeq(std::move(out));
}

namespace diagonal {

Nat pair(Nat i, Nat j) {
  const Nat w = i + j;
  return w * (w + 1) / 2 + j;
}

std::pair<Nat, Nat> unpair(Nat n) {
  // largest w with w(w+1)/2 <= n
  auto w = static_cast<Nat>((std::sqrt(8.0L * static_cast<long double>(n) + 1) - 1) / 2);
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  const Nat j = n - w * (w + 1) / 2;
  return {w - j, j};
}

FinSeq tuple(Nat n, std::size_t len) {
  std::vector<Nat> out;
  out.reserve(len);
  if (len == 0) return {};
  for (std::size_t k = 1; k < len; ++k) {
    auto [head, rest] = unpair(n);
    out.push_back(head);
    n = rest;
  }
  out.push_back(n);
  return FinSeq(std::move(out));
}

Nat tuple_index(const FinSeq& t) {
  if (t.empty()) return 0;
  Nat n = t.back();
  for (std::size_t k = t.size() - 1; k-- > 0;) n = pair(t[k], n);
  return n;
}

FinSeq finseq(Nat n) {
  if (n == 0) return {};
  auto [len_minus_one, code] = unpair(n - 1);
  return tuple(code, static_cast<std::size_t>(len_minus_one) + 1);
}

Nat finseq_index(const FinSeq& s) {
  if (s.empty()) return 0;
  return pair(s.size() - 1, tuple_index(s)) + 1;
}

}  // namespace diagonal

}  // namespace pispace
