#include "pispace/selectors.hpp"

#include <algorithm>

#include "pispace/error.hpp"

namespace pispace {

PrefixMap::PrefixMap(std::shared_ptr<const FiniteSpaceModel> target, std::size_t depth,
                     std::map<FinSeq, Point> table, Point fallback)
    : target_(std::move(target)), depth_(depth), table_(std::move(table)), fallback_(fallback) {
  if (!target_) throw ValidationError("a prefix map needs a target space");
  const auto n = target_->point_count();
  if (fallback_ >= n) throw ValidationError("default point is outside the target");
  PointSet hit = PointSet::of({fallback_});
  for (const auto& [stem, point] : table_) {
    if (stem.size() != depth_) {
      throw ValidationError("table stem " + to_string(stem) + " does not have length " +
                            std::to_string(depth_));
    }
    if (point >= n) throw ValidationError("table point is outside the target");
    hit = hit | PointSet::of({point});
  }
  if (hit != target_->whole()) throw ValidationError("prefix map is not surjective");
}

PrefixMap::Point PrefixMap::resolve(const FinSeq& stem) const {
  if (stem.size() < depth_) {
    throw RangeError("stem " + to_string(stem) + " is shorter than the map depth");
  }
  auto it = table_.find(restrict(stem, depth_));
  return it == table_.end() ? fallback_ : it->second;
}

PointSet PrefixMap::image(const FinSeq& a) const {
  if (a.size() >= depth_) return PointSet::of({resolve(a)});
  // a has infinitely many extensions of length depth, so the default class
  // always appears below it
  PointSet out = PointSet::of({fallback_});
  for (const auto& [stem, point] : table_) {
    if (is_prefix(a, stem)) out = out | PointSet::of({point});
  }
  return out;
}

PointSet PrefixMap::image_of_preimage(PointSet u, const FinSeq& a) const {
  std::vector<FinSeq> classes;
  bool default_class = false;
  if (a.size() >= depth_) {
    if (u.contains(resolve(a))) classes.push_back(a);
  } else {
    for (const auto& [stem, point] : table_) {
      if (is_prefix(a, stem) && u.contains(point)) classes.push_back(stem);
    }
    default_class = u.contains(fallback_);
  }
  PointSet out;
  for (const auto& c : classes) out = out | PointSet::of({resolve(c)});
  if (default_class) out = out | PointSet::of({fallback_});
  return out;
}

nlohmann::json PrefixMap::to_json() const {
  const auto& labels = target_->labels();
  nlohmann::json out;
  out["depth"] = depth_;
  auto& entries = out["entries"] = nlohmann::json::array();
  for (const auto& [stem, point] : table_) {
    entries.push_back({{"stem", stem}, {"point", labels[point]}});
  }
  out["default"] = labels[fallback_];
  out["points"] = labels;
  return out;
}

namespace {

std::string label_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError("point labels must be strings or integers", 0);
}

}  // namespace

PrefixMap PrefixMap::from_json(const nlohmann::json& j,
                               std::shared_ptr<const FiniteSpaceModel> target) {
  for (const char* key : {"depth", "entries", "default", "points"}) {
    if (!j.contains(key)) throw ParseError(std::string("prefix map JSON lacks '") + key + "'", 0);
  }
  std::vector<std::string> labels;
  for (const auto& p : j["points"]) labels.push_back(label_text(p));
  if (!target) {
    auto discrete = FiniteSpaceModel::discrete(labels.size());
    std::vector<PointSet> opens = discrete.opens();
    target = std::make_shared<FiniteSpaceModel>(labels, std::move(opens));
  } else if (target->labels() != labels) {
    throw ValidationError("prefix map points differ from the target space");
  }
  auto index = [&](const nlohmann::json& p) -> std::size_t {
    const auto label = label_text(p);
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ValidationError("unknown point '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  std::map<FinSeq, Point> table;
  for (const auto& e : j["entries"]) {
    table[e.at("stem").get<FinSeq>()] = index(e.at("point"));
  }
  return PrefixMap(std::move(target), j["depth"].get<std::size_t>(), std::move(table),
                   index(j["default"]));
}

void for_each_prefix_map(std::size_t max_points, std::size_t max_depth, Nat alphabet,
                         const std::function<void(const PrefixMap&)>& visit) {
  for (std::size_t k = 1; k <= max_points; ++k) {
    auto target = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel::discrete(k));
    for (std::size_t depth = 0; depth <= max_depth; ++depth) {
      std::vector<FinSeq> stems;
      for_each_node(Window{depth, alphabet}, [&](const FinSeq& a) {
        if (a.size() == depth) stems.push_back(a);
      });
      // each stem is absent (value k) or sent to one of the k points
      std::vector<std::size_t> choice(stems.size(), 0);
      while (true) {
        for (std::size_t fallback = 0; fallback < k; ++fallback) {
          std::map<FinSeq, PrefixMap::Point> table;
          PointSet hit = PointSet::of({fallback});
          for (std::size_t i = 0; i < stems.size(); ++i) {
            if (choice[i] < k) {
              table[stems[i]] = choice[i];
              hit = hit | PointSet::of({choice[i]});
            }
          }
          if (hit == target->whole()) visit(PrefixMap(target, depth, std::move(table), fallback));
        }
        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] > k) choice[i++] = 0;
        if (i == choice.size()) break;
      }
    }
  }
}

std::vector<std::pair<std::string, PrefixMap>> preset_maps() {
  std::vector<std::pair<std::string, PrefixMap>> out;

  auto sierpinski = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel::sierpinski());
  out.emplace_back("sierpinski-split", PrefixMap(sierpinski, 1, {{{0}, 0}}, 1));

  auto chain = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel(
      {"a", "b", "c"},
      {PointSet{}, PointSet::of({2}), PointSet::of({1, 2}), PointSet::of({0, 1, 2})}));
  out.emplace_back("chain-depth2",
                   PrefixMap(chain, 2, {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 2}, {{1, 1}, 0}}, 1));

  auto four = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel::discrete(4));
  out.emplace_back("discrete4-depth2",
                   PrefixMap(four, 2, {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 2}}, 3));

  auto lone = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel::discrete(1));
  out.emplace_back("point", PrefixMap(lone, 0, {}, 0));
  return out;
}

Scheme<FiniteSpaceModel> pushforward_scheme(const PrefixMap& f) {
  return Scheme<FiniteSpaceModel>(f.target_ptr(), [f](const FinSeq& a) { return f.image(a); });
}

Report selector_identity_check(const PrefixMap& f, const Scheme<FiniteSpaceModel>& v,
                               const Window& w) {
  Report r{"selector-identity", {}};
  auto check = [&](const FinSeq& a) {
    const bool ok = f.image(a) == v.node(a);
    r.add("image-equals-node", a, ok ? Status::Verified : Status::Violated,
          ok ? "" : "f[S_a] differs from V_a");
  };
  if (w.empty()) {
    check({});
  } else {
    for_each_node(w, check);
  }
  return r;
}

Report image_identity_check(const PrefixMap& f, PointSet u, const FinSeq& a) {
  Report r{"image-identity", {}};
  const auto lhs = f.image_of_preimage(u, a);
  const auto rhs = u & f.image(a);
  r.add("image-of-preimage", a, lhs == rhs ? Status::Verified : Status::Violated,
        lhs == rhs ? "" : "f[f⁻¹[U] ∩ S_a] differs from U ∩ f[S_a]");
  return r;
}

bool is_empty(const PrefixMap& f, const SigmaBasic& b) { return (f.image(b.a) & b.u).empty(); }

std::optional<SigmaBasic> sigma_basic_intersect(const SigmaBasic& b1, const SigmaBasic& b2) {
  if (!comparable(b1.a, b2.a)) return std::nullopt;
  return SigmaBasic{b1.u & b2.u, b1.a.size() >= b2.a.size() ? b1.a : b2.a};
}

std::optional<FinSeq> pi_space_probe(const PrefixMap& f, const SigmaBasic& b, Nat budget) {
  if (is_empty(f, b)) throw EmptySetError("the basic set f⁻¹[U] ∩ S_" + to_string(b.a) + " is empty");
  for (Nat i = 0; i < budget; ++i) {
    auto c = concat(b.a, diagonal::finseq(i));
    if ((f.image(c) - b.u).empty()) return c;
  }
  return std::nullopt;
}

Report fiber_density_check(const PrefixMap& f, const Window& w, Nat budget) {
  Report r{"fiber-density", {}};
  for_each_node(w, [&](const FinSeq& a) {
    const auto img = f.image(a);
    for (std::size_t x = 0; x < f.target().point_count(); ++x) {
      if (!img.contains(x)) continue;
      bool found = false;
      for (Nat i = 0; i < budget && !found; ++i) {
        auto c = concat(a, diagonal::finseq(i));
        found = c.size() >= f.depth() && f.resolve(c) == x;
      }
      r.add("fiber-meets-node", a, found ? Status::Verified : Status::Unresolved,
            found ? "" : "no stem for point " + f.target().labels()[x] + " within budget");
    }
  });
  return r;
}

std::function<std::size_t(const BranchRule&)> trivial_selector(Scheme<FiniteSpaceModel> v,
                                                               std::size_t horizon) {
  return [v = std::move(v), horizon](const BranchRule& p) {
    const auto fruit = fruit_approx(v, p, horizon);
    if (fruit.size() != 1) {
      throw StrictnessError("fruit at depth " + std::to_string(horizon) + " has " +
                            std::to_string(fruit.size()) + " points");
    }
    return static_cast<std::size_t>(std::countr_zero(fruit.bits));
  };
}

}  // namespace pispace
