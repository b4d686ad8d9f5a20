#include "pispace/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "pispace/choquet.hpp"
#include "pispace/cylinder.hpp"
#include "pispace/error.hpp"
#include "pispace/generators.hpp"
#include "pispace/lusin.hpp"
#include "pispace/scheme.hpp"
#include "pispace/selectors.hpp"

namespace pispace {

bool SuiteResult::passed() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const CriterionResult& c) { return c.passed; });
}

nlohmann::json SuiteResult::to_json(const SuiteConfig& config) const {
  nlohmann::json out;
  out["suite"] = suite;
  out["seed"] = config.seed;
  out["depth"] = config.depth ? nlohmann::json(*config.depth) : nlohmann::json("pinned");
  out["breadth"] = config.breadth ? nlohmann::json(*config.breadth) : nlohmann::json("pinned");
  out["passed"] = passed();
  auto& crit = out["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria) {
    crit.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed},
                    {"checks", c.checks},
                    {"detail", c.detail}});
  }
  auto& reps = out["reports"] = nlohmann::json::array();
  for (const auto& r : reports) reps.push_back(r.to_json());
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cylinders-oracle", "choquet-finite", "lusin",
                                              "schemes-vg",       "choquet-extract", "selectors"};
  return names;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs body, timing it and turning stray exceptions into a failed criterion.
CriterionResult timed(int id, std::string title,
                      const std::function<void(CriterionResult&)>& body) {
  CriterionResult c;
  c.id = id;
  c.title = std::move(title);
  const auto start = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("aborted: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return c;
}

std::vector<FiniteSpaceModel> small_spaces(const SuiteConfig& config) {
  if (config.space) return {*config.space};
  std::vector<FiniteSpaceModel> out;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto& t : FiniteSpaceModel::all_topologies(n)) out.push_back(std::move(t));
  }
  return out;
}

// ---- cylinders-oracle ----------------------------------------------------

CriterionResult oracle_equivalence(const SuiteConfig& config, Report& rep) {
  return timed(1, "cylinder oracle equivalence", [&](CriterionResult& c) {
    constexpr std::size_t kDepth = 3;
    constexpr Nat kFresh = 3;
    std::size_t mismatches = 0;

    auto clamp = [&](const BranchRule& p) {
      std::vector<Nat> w;
      for (std::size_t k = 0; k < kDepth; ++k) w.push_back(std::min<Nat>(p(k), kFresh));
      return FinSeq(std::move(w));
    };
    auto compare = [&](const CylExpr& a, const CylExpr& b, const std::vector<BranchRule>& ps) {
      const auto ta = trace_window(a, kDepth, kFresh);
      const auto tb = trace_window(b, kDepth, kFresh);
      auto note = [&](bool agree, const std::string& what) {
        ++c.checks;
        if (agree) return;
        ++mismatches;
        rep.add(what, {}, Status::Violated, to_string(a) + " vs " + to_string(b));
      };
      note(is_empty(a) == ta.empty(), "is_empty");
      note(subset(a, b) == std::includes(tb.begin(), tb.end(), ta.begin(), ta.end()), "subset");
      for (const auto& p : ps) note(contains_branch(a, p) == ta.contains(clamp(p)), "contains");
    };

    // fixed grid: every pair of atoms of length <= 2 under each operation
    std::vector<FinSeq> seqs;
    for_each_node(Window{2, 3}, [&](const FinSeq& s) { seqs.push_back(s); });
    const std::vector<BranchRule> fixed{
        BranchRule::constant(0), BranchRule::constant(1), BranchRule::constant(5),
        BranchRule::eventually_constant({2, 1}, 0), BranchRule::eventually_periodic({0, 2}, {1})};
    for (const auto& s : seqs) {
      for (const auto& t : seqs) {
        const auto x = CylExpr::atom(s);
        const auto y = CylExpr::atom(t);
        for (const auto& e : {x | y, x & y, x - y}) {
          for (const auto& u : seqs) compare(e, CylExpr::atom(u), fixed);
        }
      }
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> atoms(1, 4);
    for (int trial = 0; trial < 600; ++trial) {
      const auto a = gen::random_expr(rng, atoms(rng), 3, 2);
      const auto b = gen::random_expr(rng, atoms(rng), 3, 2);
      std::vector<BranchRule> ps;
      for (int i = 0; i < 4; ++i) ps.push_back(gen::random_branch(rng, 3, 4));
      compare(a, b, ps);
    }
    c.passed = mismatches == 0;
    c.detail = std::to_string(mismatches) + " mismatches in " + std::to_string(c.checks) +
               " comparisons (grid of " + std::to_string(seqs.size() * seqs.size() * 3) +
               " expressions plus 600 random pairs)";
  });
}

CriterionResult nowhere_dense_witness(const SuiteConfig& config, Report& rep) {
  return timed(8, "nowhere-dense witness", [&](CriterionResult& c) {
    std::mt19937_64 rng(config.seed + 8);
    std::size_t failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      CylExpr u;
      do {
        u = gen::random_expr(rng, 3, 3, 2);
      } while (is_empty(u));
      const auto tree = gen::random_nd_tree(rng, 3);
      const auto cyl = nd_witness(u, tree);

      const std::size_t d = std::max<std::size_t>(3, cyl.size());
      Nat fresh = 3;
      for (auto v : cyl) fresh = std::max(fresh, v + 1);
      const auto inside = trace_window(CylExpr::atom(cyl), d, fresh);
      const auto target = trace_window(u, d, fresh);
      const bool in_u = std::includes(target.begin(), target.end(), inside.begin(), inside.end());
      const bool misses_tree = std::none_of(inside.begin(), inside.end(),
                                            [&](const FinSeq& w) { return tree.contains(w); });
      ++c.checks;
      if (!in_u || !misses_tree) {
        ++failures;
        rep.add("nd-witness", cyl, Status::Violated,
                to_string(u) + (in_u ? " (meets the tree)" : " (not inside U)"));
      }
    }
    c.passed = failures == 0;
    c.detail = std::to_string(failures) + " failures in 100 random pairs";
  });
}

// ---- choquet-finite -------------------------------------------------------

CriterionResult redundant_pairs(Report& rep) {
  return timed(2, "redundant pairs and modified-strategy clauses", [&](CriterionResult& c) {
    using H = GameHistory<FiniteSpaceModel>;
    auto sp = std::make_shared<const FiniteSpaceModel>(FiniteSpaceModel(
        {"0", "1", "2"},
        {PointSet{}, PointSet::of({2}), PointSet::of({1, 2}), PointSet::of({0, 1, 2})}));
    const auto X = sp->whole();
    const auto Y = PointSet::of({1, 2});
    const auto Z = PointSet::of({2});
    std::size_t deviations = 0;
    auto expect = [&](bool ok, const std::string& what) {
      ++c.checks;
      if (!ok) {
        ++deviations;
        rep.add(what, {}, Status::Violated);
      }
    };
    auto same = [](const H& a, const H& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].u != b[k].u || a[k].v != b[k].v) return false;
      }
      return true;
    };

    const H s{{X, X}, {X, X}, {Y, Y}, {Y, Y}, {Z, Z}};
    expect(same(remove_redundant(*sp, s, X), H{{Y, Y}, {Z, Z}}), "X-Y-Z example");

    std::vector<H> calls;
    StrategyII<FiniteSpaceModel> gamma = [&](const H& h, const PointSet& u) {
      calls.push_back(h);
      return u & Z;
    };
    auto mod = modify_strategy<FiniteSpaceModel>(sp, gamma);

    expect(mod({}, X) == X && calls.empty(), "whole space at move 0");
    expect(mod({}, Y) == Z && calls.size() == 1 && calls[0].empty(), "other move 0");
    calls.clear();
    const H played{{X, X}, {Y, Y}};
    expect(mod(played, Y) == Y && calls.empty(), "echo of the last reply");
    expect(mod(played, Z) == Z && calls.size() == 1 &&
               same(calls[0], remove_redundant(*sp, played, X)) && calls[0].size() == 1,
           "delegation on the reduced history");
    c.passed = deviations == 0;
    c.detail = std::to_string(deviations) + " deviations";
  });
}

CriterionResult modified_copy_wins(const SuiteConfig& config, Report& rep) {
  return timed(3, "modified copy strategy wins on small spaces", [&](CriterionResult& c) {
    std::size_t failures = 0;
    std::size_t spaces = 0;
    constexpr std::size_t kMoves = 4;
    for (const auto& t : small_spaces(config)) {
      ++spaces;
      auto sp = std::make_shared<const FiniteSpaceModel>(t);
      const auto gamma = modify_strategy(sp, copy_strategy<FiniteSpaceModel>());
      std::vector<PointSet> moves;
      auto rec = [&](auto&& self) -> void {
        ++c.checks;
        GameOutcome<FiniteSpaceModel> game;
        try {
          game = run_game<FiniteSpaceModel>(sp, scripted_player(sp, moves), gamma,
                                            moves.size() + 2);
        } catch (const IllegalMove& e) {
          ++failures;
          rep.add("legal", {}, Status::Violated, e.what());
          return;
        }
        if (!game.stabilized || game.last.empty() || !game.ii_wins.value_or(false)) {
          ++failures;
          rep.add("stabilized", {}, Status::Violated,
                  nlohmann::json(transcript_json(*sp, game.history)).dump());
        }
        if (moves.size() == kMoves) return;
        const auto below = moves.empty() ? sp->whole() : game.history[moves.size() - 1].v;
        for (auto u : sp->opens_below(below)) {
          moves.push_back(u);
          self(self);
          moves.pop_back();
        }
      };
      rec(rec);
    }
    c.passed = failures == 0;
    c.detail = std::to_string(failures) + " failures over " + std::to_string(c.checks) +
               " runs on " + std::to_string(spaces) + " spaces";
  });
}

// ---- lusin ---------------------------------------------------------------

CriterionResult lusin_synthesis(const SuiteConfig& config, Report& rep) {
  return timed(4, "Lusin synthesis", [&](CriterionResult& c) {
    const Window w{config.depth.value_or(4), config.breadth.value_or(6)};
    const auto input = LusinInput::standard();
    const auto v = build_lusin(input);
    auto r = lusin_conditions_check(v, input, w);
    const auto again = build_lusin(LusinInput::standard());
    const bool deterministic =
        dump_scheme(v, w) == dump_scheme(again, w) &&
        r.to_json() == lusin_conditions_check(again, LusinInput::standard(), w).to_json();
    if (!deterministic) r.add("determinism", {}, Status::Violated, "rebuilt scheme differs");
    c.checks = r.findings.size();
    c.passed = r.passed() && deterministic;
    c.detail = std::to_string(r.hard_violations()) + " violations, " +
               std::to_string(r.count(Status::Unresolved)) +
               " covering checks unresolved within the budget, window d=" +
               std::to_string(w.depth) + " m=" + std::to_string(w.breadth);
    rep.merge(r);
  });
}

// ---- schemes-vg ----------------------------------------------------------

CriterionResult transform_suite(const SuiteConfig& config, Report& rep) {
  return timed(5, "V^g identities", [&](CriterionResult& c) {
    const Window w{config.depth.value_or(3), config.breadth.value_or(6)};
    const std::vector<std::pair<std::string, NatMap>> maps{
        {"identity", [](Nat n) { return n; }},
        {"half", [](Nat n) { return n / 2; }},
        {"swap01", [](Nat n) { return n == 0 ? Nat{1} : n == 1 ? Nat{0} : n; }}};

    const auto standard = standard_scheme();
    const auto lusin = build_lusin(LusinInput::standard());
    // a point whose branch in each scheme stays on child 1, within reach of
    // the duplicated children
    FinSeq deep(std::vector<Nat>(w.depth + 1, 1));
    const std::vector<std::tuple<std::string, Scheme<BaireSpaceModel>, BranchRule>> schemes{
        {"standard", standard, BranchRule::eventually_constant(deep, 0)},
        {"lusin", lusin, BranchRule::eventually_constant(*witness_cylinder(lusin.node(deep)), 0)}};

    std::size_t hard = 0;
    for (const auto& [sname, v, x] : schemes) {
      for (const auto& [gname, g] : maps) {
        std::vector<Report> parts{perm_identity_check(v, g, w),
                                  transform_property_check(v, g, w)};
        if (gname == "half") parts.push_back(dense_in_itself_probe(transform_g(v, g), x, w));
        for (auto& part : parts) {
          part.name = sname + "/" + gname + "/" + part.name;
          c.checks += part.findings.size();
          hard += part.hard_violations() + part.count(Status::Breach);
          rep.merge(part);
        }
      }
    }
    c.passed = hard == 0;
    c.detail = std::to_string(hard) + " hard violations, window d=" + std::to_string(w.depth) +
               " m=" + std::to_string(w.breadth);
  });
}

// ---- choquet-extract -----------------------------------------------------

CriterionResult extraction(const SuiteConfig& config, Report& rep) {
  return timed(6, "scheme extraction", [&](CriterionResult& c) {
    const Window w{config.depth.value_or(3), config.breadth.value_or(4)};
    std::size_t failures = 0;
    auto absorb = [&](const Report& r, bool need_verified) {
      c.checks += r.findings.size();
      const bool ok = r.passed() && (!need_verified || r.count(Status::Unresolved) == 0);
      if (!ok) {
        ++failures;
        rep.merge(r);
      }
    };

    std::size_t spaces = 0;
    for (const auto& t : small_spaces(config)) {
      ++spaces;
      auto sp = std::make_shared<const FiniteSpaceModel>(t);
      const auto copy = copy_strategy<FiniteSpaceModel>();
      const auto ex = extract_schemes<FiniteSpaceModel>(sp, copy);
      absorb(covers_check(ex.v_scheme(), w), true);
      absorb(child_pi_base_check(ex, *sp, sp->opens(), sp->opens().size(),
                                 Window{std::min<std::size_t>(w.depth, 2), w.breadth}),
             true);
      absorb(branch_replay_check(ex, sp, copy, w), true);
    }

    // Baire model: the cylinder grows at every step off index 0; index 0 is
    // the π-base element W_0 = V_a, which Γ′ answers by echoing V_a.
    auto bp = std::make_shared<const BaireSpaceModel>();
    const auto ex = extract_schemes<BaireSpaceModel>(bp, cylinder_strategy());
    std::mt19937_64 rng(config.seed + 6);
    std::uniform_int_distribution<Nat> off_echo(1, 5);
    std::uniform_int_distribution<Nat> any(0, 5);
    std::size_t baire_failures = 0;
    for (int branch = 0; branch < 40; ++branch) {
      const bool unrestricted = branch >= 20;
      std::vector<Nat> a;
      for (int k = 0; k < 6; ++k) a.push_back(unrestricted ? any(rng) : off_echo(rng));
      std::size_t grown = 0;
      for (std::size_t k = 0; k <= a.size(); ++k) {
        const auto node = restrict(FinSeq(a), k);
        const auto cyl = as_single_cylinder(ex.pair(node).v);
        if (k > 0 && a[k - 1] != 0) ++grown;
        const std::size_t need = unrestricted ? grown : k;
        ++c.checks;
        if (!cyl || cyl->size() < need) {
          ++baire_failures;
          rep.add("cylinder-length", node, Status::Violated,
                  cyl ? "length " + std::to_string(cyl->size()) : "not a cylinder");
        }
      }
    }
    absorb(branch_replay_check(ex, bp, cylinder_strategy(), Window{2, 3}), false);
    failures += baire_failures;

    c.passed = failures == 0;
    c.detail = std::to_string(failures) + " failures; " + std::to_string(spaces) +
               " finite spaces at d=" + std::to_string(w.depth) + " m=" +
               std::to_string(w.breadth) +
               "; Baire: 20 branches off the echo index to depth 6, 20 unrestricted";
  });
}

// ---- selectors -----------------------------------------------------------

CriterionResult selector_identities(Report& rep) {
  return timed(7, "selector identities", [&](CriterionResult& c) {
    std::size_t failures = 0;
    std::size_t maps = 0;
    const Window w{3, 3};
    for_each_prefix_map(4, 2, 2, [&](const PrefixMap& f) {
      ++maps;
      const auto all = f.target().whole();
      for_each_node(w, [&](const FinSeq& a) {
        // every subset, so every open of every topology on the points
        for (std::uint64_t bits = 0; bits <= all.bits; ++bits) {
          ++c.checks;
          auto r = image_identity_check(f, PointSet{bits}, a);
          if (!r.passed()) {
            ++failures;
            rep.merge(r);
          }
        }
      });
      auto r = selector_identity_check(f, pushforward_scheme(f), w);
      c.checks += r.findings.size();
      if (!r.passed()) {
        ++failures;
        rep.merge(r);
      }
    });

    std::size_t probes = 0;
    for (const auto& [name, f] : preset_maps()) {
      for (auto u : f.target().opens()) {
        for_each_node(Window{2, 3}, [&](const FinSeq& a) {
          SigmaBasic b{u, a};
          if (is_empty(f, b)) return;
          ++probes;
          ++c.checks;
          if (!pi_space_probe(f, b, 50)) {
            ++failures;
            rep.add("pi-space-probe", a, Status::Violated,
                    name + ": no witness within budget 50");
          }
        });
      }
    }
    c.passed = failures == 0;
    c.detail = std::to_string(failures) + " failures over " + std::to_string(maps) +
               " maps and " + std::to_string(probes) + " probes";
  });
}

}  // namespace

SuiteResult run_suite(const std::string& name, const SuiteConfig& config) {
  SuiteResult out;
  out.suite = name;
  Report rep{name, {}};
  if (name == "cylinders-oracle") {
    out.criteria.push_back(oracle_equivalence(config, rep));
    out.criteria.push_back(nowhere_dense_witness(config, rep));
  } else if (name == "choquet-finite") {
    out.criteria.push_back(redundant_pairs(rep));
    out.criteria.push_back(modified_copy_wins(config, rep));
  } else if (name == "lusin") {
    out.criteria.push_back(lusin_synthesis(config, rep));
  } else if (name == "schemes-vg") {
    out.criteria.push_back(transform_suite(config, rep));
  } else if (name == "choquet-extract") {
    out.criteria.push_back(extraction(config, rep));
  } else if (name == "selectors") {
    out.criteria.push_back(selector_identities(rep));
  } else {
    throw ConfigError("unknown suite '" + name + "'");
  }
  out.reports.push_back(std::move(rep));
  return out;
}

}  // namespace pispace
