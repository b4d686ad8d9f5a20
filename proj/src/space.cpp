#include "pispace/space.hpp"

#include <algorithm>
#include <set>

#include "pispace/error.hpp"

namespace pispace {

PointSet PointSet::of(std::initializer_list<std::size_t> points) {
  PointSet s;
  for (auto p : points) s.bits |= std::uint64_t{1} << p;
  return s;
}

FiniteSpaceModel::FiniteSpaceModel(std::vector<std::string> labels, std::vector<PointSet> opens)
    : labels_(std::move(labels)) {
  const auto n = labels_.size();
  if (n == 0) throw ValidationError("a finite space needs at least one point");
  if (n > 64) throw ValidationError("finite spaces are limited to 64 points");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != n) {
    throw ValidationError("point labels must be distinct");
  }
  whole_.bits = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  std::set<PointSet> family(opens.begin(), opens.end());
  for (auto o : family) {
    if (!subset(o, whole_)) throw ValidationError("an open set names a point outside the space");
  }
  if (!family.contains(PointSet{})) throw ValidationError("the empty set must be open");
  if (!family.contains(whole_)) throw ValidationError("the whole space must be open");
  for (auto a : family) {
    for (auto b : family) {
      if (!family.contains(a | b)) throw ValidationError("open family not closed under union");
      if (!family.contains(a & b)) {
        throw ValidationError("open family not closed under intersection");
      }
    }
  }
  opens_.assign(family.begin(), family.end());
}

FiniteSpaceModel FiniteSpaceModel::sierpinski() {
  return FiniteSpaceModel({"0", "1"}, {PointSet{}, PointSet::of({1}), PointSet::of({0, 1})});
}

namespace {

std::vector<std::string> numeric_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace

FiniteSpaceModel FiniteSpaceModel::discrete(std::size_t n) {
  std::vector<PointSet> opens;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) opens.push_back({bits});
  return FiniteSpaceModel(numeric_labels(n), std::move(opens));
}

FiniteSpaceModel FiniteSpaceModel::indiscrete(std::size_t n) {
  return FiniteSpaceModel(numeric_labels(n), {PointSet{}, PointSet{(std::uint64_t{1} << n) - 1}});
}

std::vector<FiniteSpaceModel> FiniteSpaceModel::all_topologies(std::size_t n) {
  if (n == 0 || n > 4) throw ValidationError("all_topologies supports 1 to 4 points");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> middle;
  for (std::uint64_t s = 1; s < full; ++s) middle.push_back(s);

  std::vector<FiniteSpaceModel> out;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << middle.size()); ++pick) {
    // membership bitmap over all 2^n subsets
    std::uint64_t member = 1 | (std::uint64_t{1} << full);
    for (std::size_t i = 0; i < middle.size(); ++i) {
      if ((pick >> i) & 1U) member |= std::uint64_t{1} << middle[i];
    }
    bool closed = true;
    for (std::uint64_t a = 0; a <= full && closed; ++a) {
      if (!((member >> a) & 1U)) continue;
      for (std::uint64_t b = a + 1; b <= full; ++b) {
        if (!((member >> b) & 1U)) continue;
        if (!((member >> (a | b)) & 1U) || !((member >> (a & b)) & 1U)) {
          closed = false;
          break;
        }
      }
    }
    if (!closed) continue;
    std::vector<PointSet> opens;
    for (std::uint64_t s = 0; s <= full; ++s) {
      if ((member >> s) & 1U) opens.push_back({s});
    }
    out.emplace_back(numeric_labels(n), std::move(opens));
  }
  return out;
}

namespace {

std::string label_of(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("point labels must be strings or integers", 0);
}

}  // namespace

FiniteSpaceModel FiniteSpaceModel::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("opens")) {
    throw ParseError("finite space JSON needs 'points' and 'opens'", 0);
  }
  std::vector<std::string> labels;
  for (const auto& p : j["points"]) labels.push_back(label_of(p));
  std::vector<PointSet> opens;
  const auto lookup = [&](const std::string& label) -> std::size_t {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ValidationError("unknown point '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  for (const auto& o : j["opens"]) {
    PointSet s;
    for (const auto& p : o) s.bits |= std::uint64_t{1} << lookup(label_of(p));
    opens.push_back(s);
  }
  return FiniteSpaceModel(std::move(labels), std::move(opens));
}

nlohmann::json FiniteSpaceModel::to_json() const {
  nlohmann::json out;
  out["points"] = labels_;
  auto& opens = out["opens"] = nlohmann::json::array();
  for (auto o : opens_) opens.push_back(render(o));
  return out;
}

bool FiniteSpaceModel::is_open(PointSet o) const {
  return std::binary_search(opens_.begin(), opens_.end(), o);
}

std::vector<PointSet> FiniteSpaceModel::opens_below(PointSet o) const {
  std::vector<PointSet> out;
  if (is_open(o) && !o.empty()) out.push_back(o);
  for (auto u : opens_) {
    if (!u.empty() && u != o && subset(u, o)) out.push_back(u);
  }
  return out;
}

PointSet FiniteSpaceModel::pi_base(PointSet o, Nat m) const {
  const auto below = opens_below(o);
  if (below.empty()) throw EmptySetError("no nonempty open set below the requested set");
  return below[m % below.size()];
}

nlohmann::json FiniteSpaceModel::render(PointSet o) const {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (o.contains(i)) out.push_back(labels_[i]);
  }
  return out;
}

PointSet FiniteSpaceModel::parse_set(const nlohmann::json& j) const {
  if (!j.is_array()) throw ParseError("a point set must be a JSON array of labels", 0);
  PointSet s;
  for (const auto& p : j) {
    const auto label = label_of(p);
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw ValidationError("unknown point '" + label + "'");
    s.bits |= std::uint64_t{1} << (it - labels_.begin());
  }
  return s;
}

const LazyAntichain& BaireSpaceModel::antichain_of(const CylExpr& o) const {
  const auto key = to_string(o);
  {
    std::lock_guard lock(mu_);
    if (auto it = antichains_.find(key); it != antichains_.end()) return it->second;
  }
  auto ac = minimal_antichain(o);
  std::lock_guard lock(mu_);
  return antichains_.emplace(key, std::move(ac)).first->second;
}

CylExpr BaireSpaceModel::pi_base(const CylExpr& o, Nat m) const {
  if (m == 0) {
    if (is_empty(o)) throw EmptySetError("pi_base of an empty open set");
    return o;
  }
  const auto& ac = antichain_of(o);
  const Nat k = m - 1;
  FinSeq stem;
  Nat rest = 0;
  if (ac.finite()) {
    stem = ac.members[k % ac.members.size()];
    rest = k / ac.members.size();
  } else {
    auto [i, r] = diagonal::unpair(k);
    stem = *ac.member(i);
    rest = r;
  }
  return CylExpr::atom(concat(stem, diagonal::finseq(rest + 1)));
}

}  // namespace pispace
