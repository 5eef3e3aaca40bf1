#include <doctest.h>

#include <deque>
#include <unordered_set>

#include "ilc/meaningless.hpp"

using namespace ilc;

namespace {
StrictnessSignature sig(const char* s) { return StrictnessSignature::parse(s); }
LambdaTree tr(const char* s) { return parse_tree(s); }
const char* kOmega = "(\\x.x x) (\\x.x x)";
const char* kN = "(\\x.x x y) (\\x.x x y)";
// root redex forever with an ever larger argument
const char* kGrow = "(\\x.\\a.x x (s a)) (\\x.\\a.x x (s a)) z";

bool has_depth0_beta(const StrictnessSignature& s, const LambdaTree& t) {
  for (const auto& r : redexes(RuleSystem::beta(s), t, 16))
    if (s.depth(r.position) == 0) return true;
  return false;
}

/// Breadth-first search over β-reducts: No when some reduct has a depth-0
/// redex, Yes when the reachable set closes without one.
Tri stable_by_search(const StrictnessSignature& s, const LambdaTree& t, std::size_t limit) {
  std::unordered_set<LambdaTree, LambdaTreeHash> seen{t};
  std::deque<LambdaTree> queue{t};
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (has_depth0_beta(s, u)) return Tri::No;
    for (const auto& r : redexes(RuleSystem::beta(s), u, 16)) {
      auto v = contract(u, r.position, RuleTag::Beta);
      if (seen.insert(v).second) {
        if (seen.size() > limit) return Tri::Unknown;
        queue.push_back(v);
      }
    }
  }
  return Tri::Yes;
}
}  // namespace

TEST_CASE("stability") {
  CHECK(is_stable(sig("111"), tr("\\x.x")).value == Tri::Yes);
  CHECK(is_stable(sig("111"), tr(kOmega)).value == Tri::No);
  CHECK(is_stable(sig("111"), tr("y ((\\x.x x) (\\x.x x))")).value == Tri::Yes);
  CHECK(is_stable(sig("111"), tr("((\\x.x x) (\\x.x x)) y")).value == Tri::Yes);
  CHECK(is_stable(sig("101"), tr("((\\x.x x) (\\x.x x)) y")).value == Tri::No);
  CHECK(is_stable(sig("111"), tr(kN)).value == Tri::No);
}

TEST_CASE("stability agrees with reduct search") {
  const char* corpus[] = {
      "\\x.x", "y ((\\x.x) z)", "(\\x.x) z", "\\x.(\\y.y) x", "y (\\x.(\\z.z) x)", "(\\x.\\y.x) z w",
      "x ((\\x.x x) (\\x.x x))", "(\\x.y) ((\\x.x x) (\\x.x x))", "\\x.x ((\\y.y) x)", "(x ((\\y.y) z)) w",
      "((\\y.y) z) w", "\\x.((\\y.y) x) x", "x y z", "(\\x.x y) (\\z.z)",
  };
  for (auto s : StrictnessSignature::all())
    for (auto text : corpus) {
      auto t = tr(text);
      auto oracle = stable_by_search(s, t, 200);
      if (oracle == Tri::Unknown) continue;
      CHECK_MESSAGE(is_stable(s, t).value == oracle, s.str() << " " << text);
    }
}

TEST_CASE("activeness") {
  for (auto s : StrictnessSignature::all()) CHECK(is_active(s, tr(kOmega)).value == Tri::Yes);
  CHECK(is_active(sig("111"), tr("\\x.x")).value == Tri::No);
  CHECK(is_active(sig("101"), tr("((\\x.x x) (\\x.x x)) y")).value == Tri::Yes);
  CHECK(is_active(sig("111"), tr("((\\x.x x) (\\x.x x)) y")).value == Tri::No);
  CHECK(is_active(sig("101"), tr(kN)).value == Tri::Yes);
  CHECK(is_active(sig("001"), tr(kN)).value == Tri::Yes);
  auto n111 = is_active(sig("111"), tr(kN));
  CHECK(n111.value == Tri::No);
  CHECK(n111.reduct == tr((std::string("(") + kN + ") y").c_str()));
  // root-stable: the spine grows below the root forever
  CHECK(is_active(sig("111"), tr("(\\x.x x x) (\\x.x x x)")).value == Tri::No);
  CHECK(is_active(sig("001"), tr("\\x.(\\x.x x) (\\x.x x)")).value == Tri::Yes);
  CHECK(is_active(sig("101"), tr("\\x.(\\x.x x) (\\x.x x)")).value == Tri::No);

  // growing self-application runs out of fuel honestly
  auto grow = is_active(sig("111"), tr(kGrow), 200);
  CHECK(grow.value == Tri::Unknown);
}

TEST_CASE("yes-witnesses replay to a destructive reduction") {
  const char* terms[] = {kOmega, "((\\x.x x) (\\x.x x)) y", kN, "\\x.(\\x.x x) (\\x.x x)",
                         "(\\x.x x) (\\y.(\\x.x x) y)"};
  for (auto s : {sig("001"), sig("101"), sig("111")})
    for (auto text : terms) {
      auto v = is_active(s, tr(text));
      if (v.value != Tri::Yes) continue;
      auto trace = witness_trace(s, v, 6);
      CHECK_MESSAGE(p_limit(trace, 4).tree.is_bot(), s.str() << " " << std::string(text));
    }
}

TEST_CASE("bot instances") {
  CHECK(in_bot_instances(sig("101"), tr(kOmega)).value == Tri::Yes);
  CHECK(in_bot_instances(sig("111"), tr("\\x.x")).value == Tri::No);
  CHECK(in_bot_instances(sig("101"), tr("bot y")).value == Tri::Yes);
  CHECK(in_bot_instances(sig("111"), tr("bot y")).value == Tri::No);
  CHECK(in_bot_instances(sig("001"), tr("\\x.bot")).value == Tri::Yes);
  CHECK(in_bot_instances(sig("101"), tr("\\x.bot")).value == Tri::No);
  CHECK(in_bot_instances(sig("111"), LambdaTree()).value == Tri::No);
}

TEST_CASE("S-normal forms") {
  CHECK(strict_nf(sig("001"), tr("\\x.bot")).is_bot());
  CHECK(strict_nf(sig("101"), tr("bot y")).is_bot());
  CHECK(strict_nf(sig("001"), tr("\\x.bot y")).is_bot());
  CHECK(strict_nf(sig("101"), tr("\\x.bot y")) == tr("\\x.bot"));
  CHECK(strict_nf(sig("111"), tr("\\x.bot y")) == tr("\\x.bot y"));
  CHECK(strict_nf(sig("110"), tr("x (y bot)")) == LambdaTree());
  CHECK(strict_nf(sig("011"), tr("x (y bot)")) == tr("x (y bot)"));
  // Cut and Unknown never collapse
  auto cut = LambdaTree::from_graph({TreeNode::app(1, 2), TreeNode::cut(), TreeNode::fvar(intern("y"))}, 0);
  CHECK(strict_nf(sig("101"), cut) == cut);
}

TEST_CASE("Böhm-like trees") {
  for (auto s : StrictnessSignature::all()) CHECK(bohm_tree(s, tr(kOmega), 8).tree.is_bot());
  auto omega_y = tr("((\\x.x x) (\\x.x x)) y");
  CHECK(bohm_tree(sig("101"), omega_y, 8).tree.is_bot());
  CHECK(bohm_tree(sig("001"), omega_y, 8).tree.is_bot());
  CHECK(bohm_tree(sig("111"), omega_y, 8).tree == tr("bot y"));

  auto lam_omega = tr("\\x.(\\x.x x) (\\x.x x)");
  CHECK(bohm_tree(sig("001"), lam_omega, 8).tree.is_bot());
  CHECK(bohm_tree(sig("101"), lam_omega, 8).tree == tr("\\x.bot"));
  CHECK(bohm_tree(sig("111"), lam_omega, 8).tree == tr("\\x.bot"));

  auto n = tr(kN);
  CHECK(bohm_tree(sig("001"), n, 8).tree.is_bot());
  CHECK(bohm_tree(sig("101"), n, 8).tree.is_bot());
  for (std::size_t d = 1; d <= 16; ++d) {
    auto a = bohm_tree(sig("111"), n, d);
    CHECK(!a.exact());
    CHECK(erase_partial_leaves(a.tree) == truncate(sig("111"), tr("rec M. M y"), d));
  }
  CHECK(bohm_tree(sig("011"), n, 4).canonical == false);
  CHECK(bohm_tree(sig("111"), n, 4).canonical);

  // fuel exhaustion shows up as an Unknown leaf, not as ⊥
  auto grow = bohm_tree(sig("111"), tr(kGrow), 4, 100);
  CHECK(grow.tree.has_unknown());
}

TEST_CASE("normalizer determinism and the m-route") {
  const char* corpus[] = {kOmega, kN, "((\\x.x x) (\\x.x x)) y", "\\x.x ((\\y.y) x) ((\\x.x x) (\\x.x x))",
                          "(\\f.f (f y)) (\\z.z)", "x ((\\x.x x) (\\x.x x)) ((\\y.y) z)"};
  for (auto s : {sig("001"), sig("101"), sig("111")})
    for (auto text : corpus) {
      auto t = tr(text);
      auto left = bohm_tree(s, t, 6, 10000, RegionOrder::LeftFirst);
      auto right = bohm_tree(s, t, 6, 10000, RegionOrder::RightFirst);
      CHECK_MESSAGE(left.tree == right.tree, s.str() << " " << text);
      auto m = m_route_normalize(s, t, 6);
      CHECK_MESSAGE(!defined_region_mismatch(left.tree, m.tree), s.str() << " " << text << " p="
                        << render_tree(left.tree) << " m=" << render_tree(m.tree));
    }
}
