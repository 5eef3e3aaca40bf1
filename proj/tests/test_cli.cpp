#include <doctest.h>

#include <sstream>

#include "ilc/cli.hpp"

using namespace ilc;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kOmega = "(\\x.x x)(\\x.x x)";

void check_round_trip(const Trace& t) {
  Trace d = trace_decode(nlohmann::json::parse(trace_export(t, nullptr).dump()));
  CHECK(d.sig == t.sig);
  CHECK(d.rules == t.rules);
  CHECK(d.strategy == t.strategy);
  CHECK(d.start == t.start);
  CHECK(d.cycle_at == t.cycle_at);
  CHECK(d.exhausted == t.exhausted);
  CHECK(d.fuel_spent == t.fuel_spent);
  REQUIRE(d.steps.size() == t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CHECK(d.steps[i].position == t.steps[i].position);
    CHECK(d.steps[i].rule == t.steps[i].rule);
    CHECK(d.steps[i].after == t.steps[i].after);
    CHECK(d.steps[i].context == t.steps[i].context);
    CHECK(d.steps[i].depth == t.steps[i].depth);
  }
}
}  // namespace

TEST_CASE("cli examples") {
  auto a = run({"tree", "--glyphs", "mixed", "--sig", "001", "--depth", "8", kOmega});
  CHECK(a.code == kExitOk);
  CHECK(a.out == "⊥\n");
  auto b = run({"tree", "--glyphs", "mixed", "--sig", "101", "--depth", "8", "(\\x.(x x) y)(\\x.(x x) y)"});
  CHECK(b.code == kExitOk);
  CHECK(b.out == "⊥\n");
  auto c = run({"dist", "--sig", "111", "x y", "x z"});
  CHECK(c.code == kExitOk);
  CHECK(c.out == "1/2\n");
}

TEST_CASE("cli exit codes") {
  // Depth cut-offs and exhausted fuel are never printed as ⊥.
  auto cut = run({"tree", "--glyphs", "ascii", "--sig", "111", "--depth", "3", "(\\x.(x x) y)(\\x.(x x) y)"});
  CHECK(cut.code == kExitUnknown);
  CHECK(cut.out.find("...") != std::string::npos);
  CHECK(cut.out.find("bot") == std::string::npos);
  auto grow = run({"tree", "--glyphs", "ascii", "--fuel", "50", "(\\x.\\a.x x (s a)) (\\x.\\a.x x (s a)) z"});
  CHECK(grow.code == kExitUnknown);
  CHECK(grow.out.find("?") != std::string::npos);

  CHECK(run({"tree", "(\\x.x"}).code == kExitParse);
  CHECK(run({"tree", "--sig", "11", "x"}).code == kExitConfig);
  CHECK(run({"tree", "--sig", "1x1", "x"}).code == kExitConfig);
  CHECK(run({"tree", "--format", "xml", "x"}).code == kExitConfig);
  CHECK(run({"trace", "--strategy", "fast", "x"}).code == kExitConfig);
  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({}).code == kExitConfig);
  auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("--depth") != std::string::npos);
}

TEST_CASE("cli subcommands") {
  auto tr = run({"trace", "--glyphs", "ascii", "--sig", "111", kOmega});
  CHECK(tr.code == kExitOk);
  CHECK(tr.out.find("tail: cycle at step 0") != std::string::npos);
  CHECK(tr.out.find("p-limit: bot") != std::string::npos);

  auto leq = run({"order", "--op", "leq", "--sig", "111", "x bot", "x y"});
  CHECK(leq.out == "true\n");
  auto glb = run({"order", "--op", "glb", "--glyphs", "ascii", "--sig", "001", "\\x.x y", "\\x.y x"});
  CHECK(glb.out == "bot\n");

  std::string peak = std::string("(\\x.x y)(") + kOmega + ")";
  auto joined = run({"join", "--glyphs", "ascii", "--sig", "101", "--rules", "betas", peak, "--left", "2*",
                     "--right", "e;1*"});
  CHECK(joined.code == kExitOk);
  CHECK(joined.out == "joined: bot\n");
  auto failed = run({"join", "--sig", "101", "--rules", "beta", peak, "--left", "2*", "--right", "e;1*"});
  CHECK(failed.out.rfind("failed at e", 0) == 0);

  auto dev = run({"dev", "--glyphs", "ascii", "(\\x.x)((\\y.y) z)", "--redexes", "e;2"});
  CHECK(dev.code == kExitOk);
  CHECK(dev.out == "develop: z (2 steps)\npaths: z\n");
  CHECK(run({"dev", "(\\x.x) y", "--redexes", "1"}).code == kExitConfig);
}

TEST_CASE("trace export") {
  Trace empty = replay(RuleSystem::beta(), parse_tree("x"), {});
  auto doc = trace_export(empty, nullptr);
  CHECK(doc["steps"].empty());
  CHECK(doc["tail"].is_null());

  auto omega = run_strategy(RuleSystem::beta(), Strategy::LeftmostOutermost, parse_tree(kOmega), 10);
  CHECK(trace_export(omega, nullptr)["tail"]["cycle_at"] == 0);

  const char* terms[] = {kOmega, "(\\x.x) ((\\y.y) z)", "(\\x.x x x)(\\x.x x x)", "(\\x.\\y.x) ((\\z.z z) w) u",
                         "rec X. (\\x.x) X", "\\a.(\\x.x bot) a"};
  for (auto sg : {"001", "101", "111", "010"}) {
    auto sig = StrictnessSignature::parse(sg);
    for (auto term : terms) {
      if (!is_guarded(sig, parse_tree(term))) continue;
      for (auto strat : {Strategy::LeftmostOutermost, Strategy::ParallelOutermost, Strategy::DepthZeroFirst}) {
        INFO(sg, " ", term);
        check_round_trip(run_strategy(RuleSystem::beta_strict(sig), strat, parse_tree(term), 6));
        check_round_trip(run_strategy(RuleSystem::beta(sig), strat, parse_tree(term), 6));
      }
    }
  }

  auto bad = trace_export(omega, nullptr);
  bad["steps"][0]["after"] = "x";
  CHECK_THROWS_AS(trace_decode(bad), std::invalid_argument);
}
