#include <doctest.h>

#include "ilc/developments.hpp"

using namespace ilc;

namespace {
StrictnessSignature sig(const char* s) { return StrictnessSignature::parse(s); }
LambdaTree tr(const char* s) { return parse_tree(s); }
const char* kOmega = "(\\x.x x) (\\x.x x)";
const char* kSelfApp = "(\\x.x x) (y z)";

Trace one_step(const char* term, Position p) {
  return replay(RuleSystem::beta_strict(sig("111")), tr(term), {p});
}

std::vector<std::set<Position>> subsets(const std::vector<Position>& ps) {
  std::vector<std::set<Position>> out;
  for (std::size_t mask = 0; mask < (1u << ps.size()); ++mask) {
    std::set<Position> s;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (mask >> i & 1) s.insert(ps[i]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Position> beta_redexes(const LambdaTree& t) {
  std::vector<Position> out;
  for (const auto& r : redexes(RuleSystem::beta(), t))
    if (r.rule == RuleTag::Beta) out.push_back(r.position);
  return out;
}

const char* kCorpus[] = {
    "(\\x.x) ((\\y.y) z)",
    "(\\x.x x) ((\\y.y) z)",
    "(\\x.\\y.x) ((\\z.z) w) ((\\u.u u) v)",
    "(\\x.x (x y)) (\\z.(\\w.w) z)",
    "\\a.(\\x.x a) ((\\y.y) a)",
    "(\\x.x) (\\y.(\\z.z y) y)",
    "(\\x.y) ((\\x.x x) (\\x.x x))",
    "(\\x.x y) ((\\z.bot) w)",
};
}  // namespace

TEST_CASE("descendants across one step") {
  auto t = one_step(kSelfApp, Position{});
  CHECK(descendants(t, {Position{2}}) == std::set<Position>{Position{1}, Position{2}});
  CHECK(descendants(t, {Position{}}).empty());
  CHECK(descendants(t, {Position{1}}).empty());
  auto id = one_step("(\\x.x) ((\\y.y) z)", Position{});
  CHECK(descendants(id, {Position{2}}) == std::set<Position>{Position{}});
  // Variable occurrences of the contracted binder have no descendants.
  CHECK(descendants(t, {Position{1, 0, 1}}).empty());
  // Positions of the body move up.
  CHECK(descendants(t, {Position{1, 0}}) == std::set<Position>{Position{}});
}

TEST_CASE("descendants across a lasso") {
  auto lasso = replay(RuleSystem::beta(sig("111")), tr("(\\x.x y) ((\\x.x x) (\\x.x x))"), {Position{2}}, 0);
  REQUIRE(lasso.is_lasso());
  CHECK(descendants(lasso, {Position{}}) == std::set<Position>{Position{}});
  CHECK(descendants(lasso, {Position{2}}).empty());
  auto lasso101 = replay(RuleSystem::beta(sig("101")), tr("((\\x.x x) (\\x.x x)) y"), {Position{1}}, 0);
  CHECK(descendants(lasso101, {Position{2}}).empty());
}

TEST_CASE("ancestors") {
  Trace empty = replay(RuleSystem::beta(), tr(kSelfApp), {});
  CHECK(ancestor(empty, Position{2, 2}) == Position{2, 2});
  auto t = one_step(kSelfApp, Position{});
  CHECK(ancestor(t, Position{1}) == Position{2});
  CHECK(ancestor(t, Position{2, 2}) == Position{2, 2});
  CHECK(ancestor(t, Position{}) == Position{1, 0});
  for (const auto& p : domain(t.final_tree())) {
    Position q = ancestor(t, p);
    CHECK(descendants(t, {q}).count(p));
    CHECK(t.start.node(*t.start.find(q)).same_label(t.final_tree().node(*t.final_tree().find(p))));
  }
}

TEST_CASE("complete developments") {
  auto s = sig("111");
  auto t = tr("(\\x.x) ((\\y.y) z)");
  CHECK(develop(s, {t, {Position{}, Position{2}}}).result == tr("z"));
  CHECK(develop(s, {tr("(\\x.x) y"), {Position{}}}).result == tr("y"));
  auto b = tr("(\\x.x) bot");
  CHECK(develop(sig("101"), {b, {}}).result == strict_nf(sig("101"), b));
  CHECK(develop(sig("110"), {b, {}}).result.is_bot());
  CHECK_THROWS_AS(develop(sig("010"), {t, {}}), std::invalid_argument);
  CHECK_THROWS_AS(develop(s, {t, {Position{1}}}), std::invalid_argument);
  auto dev = develop(s, {tr(kOmega), {Position{}}});
  CHECK(dev.result == tr(kOmega));
  CHECK(dev.trace.steps.size() == 1);
}

TEST_CASE("path labellings") {
  auto s = sig("111");
  CHECK(path_labels(s, {tr("(\\x.x) y"), {Position{}}}) == tr("y"));
  auto omega_arg = tr("(\\x.y) ((\\x.x x) (\\x.x x))");
  CHECK(path_labels(s, {omega_arg, {Position{}, Position{2}}}) == tr("y"));
  for (auto sg : {"001", "101", "111"}) {
    for (auto term : kCorpus) {
      auto t = tr(term);
      CHECK(path_labels(sig(sg), {t, {}}) == strict_nf(sig(sg), t));
      for (const auto& u : subsets(beta_redexes(t))) {
        INFO(sg, " ", term);
        CHECK(path_labels(sig(sg), {t, u}) == develop(sig(sg), {t, u}).result);
      }
    }
  }
  CHECK_THROWS_AS(path_labels(s, {tr("rec X. \\x.X"), {}}), TreeError);
}

TEST_CASE("developments commute") {
  for (auto sg : {"001", "101", "111"}) {
    for (auto term : kCorpus) {
      auto t = tr(term);
      auto all = subsets(beta_redexes(t));
      for (const auto& u : all) {
        for (const auto& v : all) {
          auto du = develop(sig(sg), {t, u});
          auto dv = develop(sig(sg), {t, v});
          auto uv = develop(sig(sg), {du.result, descendants(du.trace, v)});
          auto vu = develop(sig(sg), {dv.result, descendants(dv.trace, u)});
          INFO(sg, " ", term);
          CHECK(uv.result == vu.result);
        }
      }
    }
  }
}

TEST_CASE("strip joins") {
  auto s101 = sig("101");
  auto t = tr("(\\x.x y) ((\\x.x x) (\\x.x x))");
  auto rules = RuleSystem::beta_strict(s101);
  auto long_trace = replay(rules, t, {Position{2}}, 0);
  auto single = try_step(rules, t, Position{});
  auto j = strip_join(s101, long_trace, single);
  CHECK(j.common.is_bot());
  CHECK(j.from_single.is_lasso());

  auto s001 = sig("001");
  auto k = tr("(\\x.\\y.x) ((\\x.x x) (\\x.x x))");
  auto r001 = RuleSystem::beta_strict(s001);
  auto j2 = strip_join(s001, replay(r001, k, {Position{2}}, 0), try_step(r001, k, Position{}));
  CHECK(j2.common.is_bot());

  auto u = tr("(\\x.x x) ((\\y.y) z)");
  auto r111 = RuleSystem::beta_strict(sig("111"));
  auto j3 = strip_join(sig("111"), replay(r111, u, {Position{2}, Position{}}), try_step(r111, u, Position{2}));
  CHECK(j3.common == tr("z z"));
  CHECK(j3.from_long.steps.empty());

  CHECK_THROWS_AS(strip_join(sig("010"), long_trace, single), std::invalid_argument);
}

TEST_CASE("joinability of the counterexample peak") {
  auto t = tr("(\\x.x y) ((\\x.x x) (\\x.x x))");
  auto s101 = sig("101");
  for (bool strict : {false, true}) {
    auto rules = strict ? RuleSystem::beta_strict(s101) : RuleSystem::beta(s101);
    auto left = replay(rules, t, {Position{2}}, 0);
    auto right = replay(rules, t, {Position{}, Position{1}}, 1);
    auto v = joinability(s101, left, right, 10000, 8);
    if (strict) {
      CHECK(v.kind == JoinKind::Joined);
      CHECK(v.left.tree.is_bot());
    } else {
      CHECK(v.kind == JoinKind::Failed);
    }
  }
  auto same = replay(RuleSystem::beta(), tr(kSelfApp), {Position{}});
  CHECK(joinability(sig("111"), same, same, 100, 8).kind == JoinKind::Joined);
}
