#include "ilc/cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ilc/developments.hpp"

namespace ilc {

using nlohmann::json;

namespace {

struct Config {
  std::string sig = "111";
  std::size_t depth = 16;
  std::size_t fuel = 10000;
  std::string rules = "beta";
  std::string strategy = "lmo";
  std::string format = "text";
  std::string glyphs = "auto";
};

Glyphs resolve_glyphs(const std::string& name) {
  if (name == "ascii") return Glyphs::Ascii;
  if (name == "unicode") return Glyphs::Unicode;
  if (name == "mixed") return Glyphs::Mixed;
  for (const char* var : {"LC_ALL", "LC_CTYPE", "LANG"}) {
    const char* v = std::getenv(var);
    if (!v || !*v) continue;
    std::string s(v);
    return s.find("UTF-8") != std::string::npos || s.find("utf8") != std::string::npos ||
                   s.find("UTF8") != std::string::npos || s.find("utf-8") != std::string::npos
               ? Glyphs::Mixed
               : Glyphs::Ascii;
  }
  return Glyphs::Ascii;
}

RuleSystem make_rules(const std::string& name, const StrictnessSignature& sig, std::size_t fuel) {
  if (name == "beta") return RuleSystem::beta(sig);
  if (name == "eta") return RuleSystem::eta(sig);
  if (name == "strict") return RuleSystem::strict(sig);
  if (name == "betas") return RuleSystem::beta_strict(sig);
  if (name == "bohm") return RuleSystem::bohm_bot(sig, make_bot_oracle(sig, fuel));
  throw std::invalid_argument("unknown rule system: " + name);
}

// "e;2;10*" : positions separated by ';' or spaces, '*' marks where the
// repeated suffix starts.
struct PositionScript {
  std::vector<Position> positions;
  std::optional<std::size_t> repeat_from;
};

PositionScript parse_script(const std::string& text) {
  PositionScript s;
  std::string item;
  auto flush = [&] {
    if (item.empty()) return;
    if (item.back() == '*') {
      if (s.repeat_from) throw std::invalid_argument("more than one '*' in " + text);
      s.repeat_from = s.positions.size();
      item.pop_back();
    }
    s.positions.push_back(Position::parse(item));
    item.clear();
  };
  for (char c : text) {
    if (c == ';' || c == ' ') flush();
    else item.push_back(c);
  }
  flush();
  return s;
}

json positions_json(const std::set<Position>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

std::string positions_text(const std::set<Position>& ps) {
  if (ps.empty()) return "(none)";
  std::string s;
  for (const auto& p : ps) s += (s.empty() ? "" : " ") + p.str();
  return s;
}

json approximant_json(const Approximant& a) {
  return {{"tree", render_tree(a.tree, Glyphs::Ascii)}, {"exact", a.exact()}, {"fuel_spent", a.fuel_spent}};
}

json report_json(const ConvergenceReport& r) {
  json m = {{"value", tri_name(r.m.value)}, {"diagnostic", r.m.diagnostic}};
  m["witness_depth"] = r.m.witness_depth ? json(*r.m.witness_depth) : json(nullptr);
  return {{"m", m},
          {"p_limit", approximant_json(r.p_limit)},
          {"volatile", {{"all", positions_json(r.volatile_positions.all)},
                        {"outermost", positions_json(r.volatile_positions.outermost)}}},
          {"destructive", r.destructive}};
}

class Runner {
public:
  Runner(const Config& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), sig_(StrictnessSignature::parse(cfg.sig)), glyphs_(resolve_glyphs(cfg.glyphs)), out_(out),
        err_(err) {
    if (cfg.format != "text" && cfg.format != "json") throw std::invalid_argument("unknown format: " + cfg.format);
    parse_strategy(cfg.strategy);
  }

  int tree(const std::string& text) {
    Approximant a = bohm_tree(sig_, parse_tree(text), cfg_.depth, cfg_.fuel);
    if (!a.canonical) err_ << "note: signature " << sig_.str() << " has no unique normal forms\n";
    if (json_out())
      emit({{"command", "tree"}, {"sig", sig_.str()}, {"depth", cfg_.depth}, {"result", approximant_json(a)}});
    else
      out_ << render(a.tree) << "\n";
    return a.exact() ? kExitOk : kExitUnknown;
  }

  int trace(const std::string& text) {
    RuleSystem rules = make_rules(cfg_.rules, sig_, cfg_.fuel);
    Trace tr = run_strategy(rules, parse_strategy(cfg_.strategy), parse_tree(text), cfg_.fuel);
    ConvergenceReport r = analyze(tr, cfg_.depth);
    if (json_out()) {
      json doc = trace_export(tr, &r);
      doc["command"] = "trace";
      emit(doc);
    } else {
      out_ << "start: " << render(tr.start) << "\n";
      for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        const Step& s = tr.steps[i];
        out_ << "  " << i << ". " << s.position.str() << " " << rule_name(s.rule) << " depth " << s.depth
             << " -> " << render(s.after) << "\n";
      }
      if (tr.cycle_at) out_ << "tail: cycle at step " << *tr.cycle_at << "\n";
      else out_ << "tail: " << (tr.exhausted ? "fuel exhausted" : "normal form") << "\n";
      out_ << "m-convergent: " << tri_name(r.m.value) << " (" << r.m.diagnostic << ")\n";
      out_ << "p-limit: " << render(r.p_limit.tree) << "\n";
      out_ << "outermost volatile: " << positions_text(r.volatile_positions.outermost) << "\n";
      out_ << "destructive: " << (r.destructive ? "yes" : "no") << "\n";
    }
    return r.m.value == Tri::Unknown || !r.p_limit.exact() ? kExitUnknown : kExitOk;
  }

  int dist(const std::string& a, const std::string& b) {
    Distance d = tree_distance(sig_, parse_tree(a), parse_tree(b));
    if (json_out()) emit({{"command", "dist"}, {"sig", sig_.str()}, {"distance", d.str()}});
    else out_ << d.str() << "\n";
    return kExitOk;
  }

  int order(const std::string& op, const std::vector<std::string>& texts) {
    std::vector<LambdaTree> ts;
    for (const auto& t : texts) ts.push_back(parse_tree(t));
    if (op == "leq") {
      if (ts.size() != 2) throw std::invalid_argument("--op leq takes exactly two trees");
      OrderVerdict v = tree_leq(sig_, ts[0], ts[1]);
      if (json_out()) {
        json doc = {{"command", "order"}, {"op", "leq"}, {"sig", sig_.str()}, {"result", v.result}};
        doc["witness"] = v.witness ? json(v.witness->str()) : json(nullptr);
        emit(doc);
      } else {
        out_ << (v.result ? "true" : "false");
        if (v.witness) out_ << " (witness " << v.witness->str() << ")";
        out_ << "\n";
      }
      return kExitOk;
    }
    if (op != "glb") throw std::invalid_argument("unknown --op: " + op);
    if (ts.empty()) throw std::invalid_argument("--op glb needs at least one tree");
    LambdaTree g = glb(sig_, ts);
    if (json_out())
      emit({{"command", "order"}, {"op", "glb"}, {"sig", sig_.str()}, {"tree", render_tree(g, Glyphs::Ascii)}});
    else
      out_ << render(g) << "\n";
    return kExitOk;
  }

  int join(const std::string& text, const std::string& left, const std::string& right) {
    RuleSystem rules = make_rules(cfg_.rules, sig_, cfg_.fuel);
    LambdaTree t = parse_tree(text);
    auto l = parse_script(left), r = parse_script(right);
    Trace lt = replay(rules, t, l.positions, l.repeat_from, cfg_.fuel);
    Trace rt = replay(rules, t, r.positions, r.repeat_from, cfg_.fuel);
    JoinVerdict v = joinability(sig_, lt, rt, cfg_.fuel, cfg_.depth);
    if (json_out()) {
      json doc = {{"command", "join"},          {"sig", sig_.str()},
                  {"rules", rules.name()},      {"verdict", join_kind_name(v.kind)},
                  {"left", approximant_json(v.left)}, {"right", approximant_json(v.right)}};
      doc["mismatch"] = v.mismatch ? json(v.mismatch->str()) : json(nullptr);
      emit(doc);
    } else {
      out_ << join_kind_name(v.kind);
      if (v.kind == JoinKind::Joined) out_ << ": " << render(v.left.tree);
      if (v.mismatch) out_ << " at " << v.mismatch->str();
      out_ << "\n";
      if (v.kind != JoinKind::Joined) {
        out_ << "left: " << render(v.left.tree) << "\n";
        out_ << "right: " << render(v.right.tree) << "\n";
      }
    }
    return v.kind == JoinKind::Unknown ? kExitUnknown : kExitOk;
  }

  int dev(const std::string& text, const std::string& redex_list, const std::string& method) {
    auto script = parse_script(redex_list);
    if (script.repeat_from) throw std::invalid_argument("redex sets take no '*'");
    RedexSet rs{parse_tree(text), {script.positions.begin(), script.positions.end()}};
    if (method != "develop" && method != "paths" && method != "both")
      throw std::invalid_argument("unknown --method: " + method);
    std::optional<Development> d;
    std::optional<LambdaTree> p;
    if (method != "paths") d = develop(sig_, rs, cfg_.fuel);
    if (method != "develop") p = path_labels(sig_, rs);
    bool agree = !(d && p) || d->result == *p;
    bool unknown = d && d->trace.exhausted;
    if (json_out()) {
      json doc = {{"command", "dev"}, {"sig", sig_.str()}, {"redexes", positions_json(rs.positions)}};
      doc["develop"] = d ? json{{"tree", render_tree(d->result, Glyphs::Ascii)},
                                {"steps", d->trace.steps.size()},
                                {"exhausted", d->trace.exhausted}}
                         : json(nullptr);
      doc["paths"] = p ? json(render_tree(*p, Glyphs::Ascii)) : json(nullptr);
      doc["agree"] = agree;
      emit(doc);
    } else {
      if (d) out_ << "develop: " << render(d->result) << " (" << d->trace.steps.size() << " steps)\n";
      if (p) out_ << "paths: " << render(*p) << "\n";
    }
    if (!agree) err_ << "error: development and path labelling disagree\n";
    return unknown ? kExitUnknown : agree ? kExitOk : kExitConfig;
  }

private:
  bool json_out() const { return cfg_.format == "json"; }
  std::string render(const LambdaTree& t) const { return render_tree(t, glyphs_); }
  void emit(const json& doc) { out_ << doc.dump(2) << "\n"; }

  Config cfg_;
  StrictnessSignature sig_;
  Glyphs glyphs_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

json trace_export(const Trace& trace, const ConvergenceReport* report) {
  json steps = json::array();
  for (const auto& s : trace.steps)
    steps.push_back({{"position", s.position.str()},
                     {"rule", rule_name(s.rule)},
                     {"depth", s.depth},
                     {"after", render_tree(s.after, Glyphs::Ascii)},
                     {"context", render_tree(s.context, Glyphs::Ascii)}});
  json doc = {{"sig", trace.sig.str()},          {"rules", trace.rules},
              {"strategy", trace.strategy},      {"start", render_tree(trace.start, Glyphs::Ascii)},
              {"steps", steps},                  {"exhausted", trace.exhausted},
              {"fuel_spent", trace.fuel_spent}};
  doc["tail"] = trace.cycle_at ? json{{"cycle_at", *trace.cycle_at}} : json(nullptr);
  doc["report"] = report ? report_json(*report) : json(nullptr);
  return doc;
}

Trace trace_decode(const json& doc) {
  StrictnessSignature sig = StrictnessSignature::parse(doc.at("sig").get<std::string>());
  RuleSystem rules = make_rules(doc.at("rules").get<std::string>(), sig, 10000);
  Trace t;
  t.sig = sig;
  t.rules = doc.at("rules").get<std::string>();
  t.strategy = doc.at("strategy").get<std::string>();
  t.start = parse_tree(doc.at("start").get<std::string>());
  t.exhausted = doc.at("exhausted").get<bool>();
  t.fuel_spent = doc.at("fuel_spent").get<std::size_t>();
  LambdaTree cur = t.start;
  for (const auto& s : doc.at("steps")) {
    Position p = Position::parse(s.at("position").get<std::string>());
    Step step = try_step(rules, cur, p, parse_rule_tag(s.at("rule").get<std::string>()));
    if (!(step.after == parse_tree(s.at("after").get<std::string>())))
      throw std::invalid_argument("recorded step at " + p.str() + " does not reproduce");
    cur = step.after;
    t.steps.push_back(std::move(step));
  }
  if (!doc.at("tail").is_null()) {
    std::size_t k = doc.at("tail").at("cycle_at").get<std::size_t>();
    if (k >= t.steps.size() || !(t.steps[k].before == cur)) throw std::invalid_argument("cycle does not close");
    t.cycle_at = k;
  }
  return t;
}

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Partial-order infinitary lambda calculi: Böhm-like trees, convergence, developments"};
  app.set_help_all_flag("--help-all", "Expand all help");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--sig", cfg.sig, "Strictness signature, three digits from {0,1}")->capture_default_str();
  app.add_option("--depth", cfg.depth, "Depth bound for approximants")->capture_default_str();
  app.add_option("--fuel", cfg.fuel, "Step budget per analysis")->capture_default_str();
  app.add_option("--rules", cfg.rules, "Rule system: beta|eta|strict|betas|bohm")->capture_default_str();
  app.add_option("--strategy", cfg.strategy, "Reduction strategy: lmo|po|d0")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format: text|json")->capture_default_str();
  app.add_option("--glyphs", cfg.glyphs, "Output glyphs: auto (from locale)|mixed|ascii|unicode")
      ->capture_default_str();

  std::string term, term2, op = "leq", left, right, redex_list, method = "both";
  std::vector<std::string> terms;
  auto* tree = app.add_subcommand("tree", "Depth-bounded Böhm-like tree");
  tree->add_option("term", term, "Term or rec literal")->required();
  auto* trace = app.add_subcommand("trace", "Run a strategy and analyze convergence");
  trace->add_option("term", term, "Term or rec literal")->required();
  auto* dist = app.add_subcommand("dist", "Tree distance");
  dist->add_option("a", term, "First tree")->required();
  dist->add_option("b", term2, "Second tree")->required();
  auto* order = app.add_subcommand("order", "Order queries");
  order->add_option("--op", op, "leq|glb")->capture_default_str();
  order->add_option("trees", terms, "Trees")->required();
  auto* join = app.add_subcommand("join", "Joinability of a peak");
  join->add_option("term", term, "Peak source")->required();
  join->add_option("--left", left, "Left trace: positions separated by ';', '*' marks the repeated suffix")
      ->required();
  join->add_option("--right", right, "Right trace, same syntax")->required();
  auto* dev = app.add_subcommand("dev", "Complete development of a redex set");
  dev->add_option("term", term, "Finite tree")->required();
  dev->add_option("--redexes", redex_list, "Redex positions separated by ';'");
  dev->add_option("--method", method, "develop|paths|both")->capture_default_str();

  std::vector<std::string> argv_store{"ilc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Runner run(cfg, out, err);
    if (*tree) return run.tree(term);
    if (*trace) return run.trace(term);
    if (*dist) return run.dist(term, term2);
    if (*order) return run.order(op, terms);
    if (*join) return run.join(term, left, right);
    if (*dev) return run.dev(term, redex_list, method);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace ilc
