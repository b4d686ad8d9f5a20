#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pispace/choquet.hpp"
#include "pispace/error.hpp"
#include "pispace/lusin.hpp"
#include "pispace/selectors.hpp"
#include "pispace/suites.hpp"

using namespace pispace;

namespace {

constexpr std::size_t kMaxDepth = 8;
constexpr Nat kMaxBreadth = 16;

enum Exit { kPass = 0, kViolations = 1, kConfig = 2 };

struct Options {
  std::string suite = "all";
  std::optional<std::size_t> depth;
  std::optional<Nat> breadth;
  std::uint64_t seed = 1;
  std::string space;
  std::string strategy;
  std::string json_out;
  std::string base = "std";
  std::string kind = "standard";
};

void check_guardrails(const Options& o) {
  if (o.depth && *o.depth > kMaxDepth) {
    throw ConfigError("--depth " + std::to_string(*o.depth) + " exceeds the limit of " +
                      std::to_string(kMaxDepth));
  }
  if (o.breadth && *o.breadth > kMaxBreadth) {
    throw ConfigError("--breadth " + std::to_string(*o.breadth) + " exceeds the limit of " +
                      std::to_string(kMaxBreadth));
  }
}

Window window_of(const Options& o, std::size_t depth, Nat breadth) {
  return Window{o.depth.value_or(depth), o.breadth.value_or(breadth)};
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::optional<FiniteSpaceModel> finite_space(const std::string& descriptor) {
  if (descriptor.empty() || descriptor == "baire") return std::nullopt;
  if (descriptor == "sierpinski") return FiniteSpaceModel::sierpinski();
  return FiniteSpaceModel::from_json(read_json(descriptor));
}

void emit(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

int cmd_verify(const Options& o) {
  SuiteConfig config;
  config.depth = o.depth;
  config.breadth = o.breadth;
  config.seed = o.seed;
  config.space = finite_space(o.space);

  std::vector<std::string> names;
  if (o.suite == "all") {
    names = suite_names();
  } else {
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), o.suite) == known.end()) {
      throw ConfigError("unknown suite '" + o.suite + "'");
    }
    names.push_back(o.suite);
  }

  bool ok = true;
  auto all = nlohmann::json::array();
  for (const auto& name : names) {
    auto result = run_suite(name, config);
    for (const auto& c : result.criteria) {
      std::cerr << name << ": criterion " << c.id << " " << (c.passed ? "pass" : "FAIL") << "  "
                << c.detail << "\n";
    }
    ok = ok && result.passed();
    all.push_back(result.to_json(config));
  }
  if (!o.json_out.empty()) emit(names.size() == 1 ? all[0] : all, o.json_out);
  return ok ? kPass : kViolations;
}

int cmd_build_lusin(const Options& o) {
  std::optional<LusinInput> input;
  if (o.base == "std") {
    input = LusinInput::standard();
  } else {
    std::ifstream in(o.base);
    if (!in) throw ConfigError("cannot read base file '" + o.base + "'");
    input = LusinInput::from_stream(in);
  }
  const auto w = window_of(o, 3, 4);
  const auto v = build_lusin(*input);
  const auto report = lusin_conditions_check(v, *input, w);
  nlohmann::json out;
  out["scheme"] = dump_scheme(v, w);
  out["report"] = report.to_json();
  emit(out, o.json_out);
  return report.passed() ? kPass : kViolations;
}

int cmd_extract(const Options& o) {
  nlohmann::json out;
  Report report{"extract", {}};
  if (auto fs = finite_space(o.space)) {
    if (!o.strategy.empty() && o.strategy != "copy") {
      throw ConfigError("finite spaces support only --strategy copy");
    }
    const auto w = window_of(o, 2, static_cast<Nat>(fs->opens().size()));
    auto sp = std::make_shared<const FiniteSpaceModel>(*fs);
    const auto ex = extract_schemes<FiniteSpaceModel>(sp, copy_strategy<FiniteSpaceModel>());
    out["U"] = dump_scheme(ex.u_scheme(), w);
    out["V"] = dump_scheme(ex.v_scheme(), w);
    report = covers_check(ex.v_scheme(), w);
  } else {
    if (!o.strategy.empty() && o.strategy != "cylinder") {
      throw ConfigError("the Baire model supports only --strategy cylinder");
    }
    const auto w = window_of(o, 2, 3);
    auto sp = std::make_shared<const BaireSpaceModel>();
    const auto ex = extract_schemes<BaireSpaceModel>(sp, cylinder_strategy());
    out["U"] = dump_scheme(ex.u_scheme(), w);
    out["V"] = dump_scheme(ex.v_scheme(), w);
    report = covers_check(ex.v_scheme(), w);
  }
  out["report"] = report.to_json();
  emit(out, o.json_out);
  return report.passed() ? kPass : kViolations;
}

int cmd_export(const Options& o) {
  nlohmann::json out;
  if (o.kind == "standard") {
    out = dump_scheme(standard_scheme(), window_of(o, 2, 3));
  } else if (o.kind == "lusin") {
    out = dump_scheme(build_lusin(LusinInput::standard()), window_of(o, 2, 3));
  } else if (o.kind == "presets") {
    for (const auto& [name, f] : preset_maps()) {
      out[name] = {{"map", f.to_json()}, {"target", f.target().to_json()}};
    }
  } else if (o.kind == "space") {
    auto fs = finite_space(o.space.empty() ? "sierpinski" : o.space);
    if (!fs) throw ConfigError("--kind space needs a finite space");
    out = fs->to_json();
  } else {
    throw ConfigError("unknown export kind '" + o.kind + "'");
  }
  emit(out, o.json_out);
  return kPass;
}

// ---- interactive game ------------------------------------------------------

template <SpaceModel S>
struct Repl {
  std::shared_ptr<const S> space;
  StrategyII<S> machine;
  std::function<typename S::Open(const std::string&)> parse;
  std::function<void(const GameHistory<S>&)> hint;
  GameHistory<S> history;

  void run(std::istream& in, std::ostream& out) {
    out << "you are player I; enter a move, :dump FILE or :quit\n";
    hint(history);
    for (std::string line; out << "> " << std::flush, std::getline(in, line);) {
      const auto start = line.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      line = line.substr(start);
      if (line == ":quit") break;
      if (line.rfind(":dump", 0) == 0) {
        std::istringstream words(line.substr(5));
        std::string path;
        words >> path;
        if (path.empty()) {
          out << "usage: :dump FILE\n";
          continue;
        }
        std::ofstream file(path);
        if (!file) {
          out << "cannot write '" << path << "'\n";
          continue;
        }
        file << transcript_json(*space, history).dump(2) << "\n";
        out << "transcript written to " << path << "\n";
        continue;
      }
      try {
        play(parse(line), out);
      } catch (const std::exception& e) {
        out << "rejected: " << e.what() << "\n";
      }
      hint(history);
    }
  }

  void play(const typename S::Open& u, std::ostream& out) {
    if (space->is_empty(u)) throw IllegalMove(Player::I, history.size(), "empty move");
    if (!history.empty() && !space->subset(u, history.back().v)) {
      throw IllegalMove(Player::I, history.size(), "move is not inside the last reply");
    }
    auto v = machine(history, u);
    history.push_back({u, v});
    out << "II replies " << space->render(v).dump() << "\n";
    out << "history:";
    for (const auto& r : history) {
      out << " <" << space->render(r.u).dump() << ", " << space->render(r.v).dump() << ">";
    }
    out << "\n";
    if constexpr (std::is_same_v<S, FiniteSpaceModel>) {
      const bool stable =
          history.size() >= 2 && history[history.size() - 2].v == history.back().v;
      out << "intersection so far " << space->render(v).dump()
          << (stable ? " (stabilized)" : " (still shrinking)") << "; II wins every run here\n";
    } else {
      out << "II alive after " << history.size() << " rounds\n";
    }
  }
};

int cmd_play(const Options& o) {
  if (auto fs = finite_space(o.space.empty() ? "sierpinski" : o.space)) {
    if (!o.strategy.empty() && o.strategy != "copy") {
      throw ConfigError("finite spaces support only --strategy copy");
    }
    auto sp = std::make_shared<const FiniteSpaceModel>(*fs);
    Repl<FiniteSpaceModel> repl{
        sp, modify_strategy(sp, copy_strategy<FiniteSpaceModel>()),
        [sp](const std::string& text) {
          if (!text.empty() && text.front() == '[') return sp->parse_set(nlohmann::json::parse(text));
          std::istringstream words(text);
          auto labels = nlohmann::json::array();
          for (std::string w; words >> w;) labels.push_back(w);
          auto set = sp->parse_set(labels);
          if (!sp->is_open(set)) throw ValidationError("that set is not open");
          return set;
        },
        [sp](const GameHistory<FiniteSpaceModel>& h) {
          const auto below = h.empty() ? sp->whole() : h.back().v;
          std::cout << "legal moves:";
          for (auto u : sp->opens_below(below)) std::cout << " " << sp->render(u).dump();
          std::cout << "\n";
        },
        {}};
    repl.run(std::cin, std::cout);
    return kPass;
  }
  if (!o.strategy.empty() && o.strategy != "cylinder") {
    throw ConfigError("the Baire model supports only --strategy cylinder");
  }
  auto sp = std::make_shared<const BaireSpaceModel>();
  Repl<BaireSpaceModel> repl{
      sp, modify_strategy(sp, cylinder_strategy()), [](const std::string& text) { return parse_expr(text); },
      [](const GameHistory<BaireSpaceModel>& h) {
        std::cout << "enter a cylinder expression"
                  << (h.empty() ? std::string(", e.g. S(0,1)")
                                : " inside " + to_string(h.back().v))
                  << "\n";
      },
      {}};
  repl.run(std::cin, std::cout);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pispace: Baire cylinders, Souslin schemes, Lusin synthesis, Choquet games"};
  app.require_subcommand(1);
  Options o;

  auto add_window = [&](CLI::App* sub) {
    sub->add_option("--depth", o.depth, "window depth (<= 8)");
    sub->add_option("--breadth", o.breadth, "child budget (<= 16)");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--json", o.json_out, "output file ('-' for stdout)");
  };

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", o.suite, "suite name or 'all'");
  verify->add_option("--seed", o.seed, "seed for randomized checks");
  verify->add_option("--space", o.space, "finite space JSON file for the game suites");
  add_window(verify);
  add_out(verify);

  auto* lusin = app.add_subcommand("build-lusin", "synthesize a Lusin scheme and check it");
  lusin->add_option("--base", o.base, "'std' or a file with one expression per line");
  add_window(lusin);
  add_out(lusin);

  auto* extract = app.add_subcommand("extract", "extract schemes from a strategy");
  extract->add_option("--space", o.space, "'baire', 'sierpinski' or a JSON file");
  extract->add_option("--strategy", o.strategy, "copy | cylinder");
  add_window(extract);
  add_out(extract);

  auto* play = app.add_subcommand("play", "play player I against the modified strategy");
  play->add_option("--space", o.space, "'baire', 'sierpinski' or a JSON file");
  play->add_option("--strategy", o.strategy, "copy | cylinder");

  auto* exp = app.add_subcommand("export", "write JSON for schemes, spaces or preset maps");
  exp->add_option("--kind", o.kind, "standard | lusin | presets | space");
  exp->add_option("--space", o.space, "finite space JSON file for --kind space");
  add_window(exp);
  add_out(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    check_guardrails(o);
    if (*verify) return cmd_verify(o);
    if (*lusin) return cmd_build_lusin(o);
    if (*extract) return cmd_extract(o);
    if (*play) return cmd_play(o);
    if (*exp) return cmd_export(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
