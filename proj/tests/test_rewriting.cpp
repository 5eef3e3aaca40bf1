#include <doctest.h>

#include "ilc/order.hpp"
#include "ilc/rewriting.hpp"

using namespace ilc;

namespace {
StrictnessSignature sig(const char* s) { return StrictnessSignature::parse(s); }
LambdaTree tr(const char* s) { return parse_tree(s); }
const char* kOmega = "(\\x.x x) (\\x.x x)";
}  // namespace

TEST_CASE("substitution") {
  auto y = tr("y");
  auto var0 = LambdaTree::leaf(TreeNode::bvar(0));
  CHECK(substitute(var0, y) == y);
  auto selfapp = LambdaTree::from_graph({TreeNode::app(1, 1), TreeNode::bvar(0)}, 0);
  CHECK(substitute(selfapp, tr("y z")) == tr("(y z) (y z)"));
  CHECK(substitute(tr("x"), tr(kOmega)) == tr("x"));
  // argument is shifted under binders of the body: (\x.\y.x) applied to a free index
  auto lam_body = LambdaTree::from_graph({TreeNode::lam(1), TreeNode::bvar(1)}, 0);
  auto free1 = LambdaTree::leaf(TreeNode::bvar(3));
  CHECK(substitute(lam_body, free1) == LambdaTree::from_graph({TreeNode::lam(1), TreeNode::bvar(4)}, 0));
  // indices above the substituted one drop by one
  CHECK(substitute(LambdaTree::leaf(TreeNode::bvar(2)), y) == LambdaTree::leaf(TreeNode::bvar(1)));
}

TEST_CASE("redex search") {
  auto omega = tr(kOmega);
  auto rs = redexes(RuleSystem::beta(), omega, 8);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0] == Redex{Position{}, RuleTag::Beta});

  auto s = redexes(RuleSystem::strict(sig("101")), tr("bot y"), 8);
  REQUIRE(s.size() == 1);
  CHECK(s[0] == Redex{Position{}, RuleTag::Strict});
  CHECK(redexes(RuleSystem::strict(sig("111")), tr("bot y"), 8).empty());
  CHECK(redexes(RuleSystem::strict(sig("111")), tr("\\x.bot"), 8).empty());
  CHECK(redexes(RuleSystem::strict(sig("001")), tr("\\x.bot"), 8).size() == 1);

  // infinite tree: one redex per unfolding, bounded by length
  auto inf = tr("rec M. M ((\\z.z) y)");
  CHECK(redexes(RuleSystem::beta(), inf, 3).size() == 3);
}

TEST_CASE("acut") {
  Position p{1, 0, 2};
  CHECK(acut(sig("111"), p) == p);
  CHECK(acut(sig("010"), p) == Position{1});
  CHECK(acut(sig("000"), p) == Position{});
  CHECK(acut(sig("000"), Position{2, 2}) == Position{});
}

TEST_CASE("reduction contexts of the (\\x.x Omega) y step") {
  auto t = tr("(\\x.x ((\\x.x x) (\\x.x x))) y");
  Position p{1, 0, 2};
  for (auto s : StrictnessSignature::all()) {
    auto step = try_step(RuleSystem::beta(s), t, p);
    CHECK(step.after == t);
    LambdaTree expected;
    if (s.a(2)) expected = tr("(\\x.x bot) y");
    else if (s.a(0)) expected = tr("(\\x.bot) y");
    else if (s.a(1)) expected = tr("bot y");
    else expected = LambdaTree();
    CHECK_MESSAGE(step.context == expected, s.str());
    CHECK(step.context == glb_excluding(s, {step.before, step.after}, p));
    CHECK(tree_leq(s, step.context, step.before));
    CHECK(tree_leq(s, step.context, step.after));
  }
}

TEST_CASE("single steps") {
  auto step = try_step(RuleSystem::beta(), tr("(\\x.y) z"), Position{});
  CHECK(step.after == tr("y"));
  CHECK(step.context.is_bot());
  CHECK(step.depth == 0);
  CHECK_THROWS_AS(try_step(RuleSystem::beta(), tr("x y"), Position{}), StepError);
  CHECK_THROWS_AS(try_step(RuleSystem::beta(), tr("x y"), Position{1, 1}), StepError);

  // η
  auto eta = RuleSystem::eta();
  CHECK(try_step(eta, tr("\\x.y x"), Position{}).after == tr("y"));
  CHECK(!redex_at(eta, tr("\\x.x x"), Position{}));
  CHECK(try_step(eta, tr("\\w.\\x.w x"), Position{0}).after == tr("\\w.w"));

  // β keeps Hole-free trees Hole-free
  auto total = try_step(RuleSystem::beta(), tr("(\\x.x x) (y z)"), Position{});
  CHECK(total.after == tr("(y z) (y z)"));
  CHECK(total.after.is_total());
}

TEST_CASE("strategies") {
  auto lasso = run_strategy(RuleSystem::beta(), Strategy::LeftmostOutermost, tr(kOmega), 10);
  CHECK(lasso.steps.size() == 1);
  CHECK(lasso.cycle_at == 0u);

  auto closed = run_strategy(RuleSystem::beta(), Strategy::LeftmostOutermost, tr("(\\x.y) z"), 10);
  CHECK(closed.steps.size() == 1);
  CHECK(closed.is_closed());
  CHECK(closed.final_tree() == tr("y"));

  auto s = run_strategy(RuleSystem::beta_strict(sig("101")), Strategy::LeftmostOutermost, tr("bot y"), 10);
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0].rule == RuleTag::Strict);
  CHECK(s.final_tree().is_bot());

  // (\x.x Omega) y stepping inside the argument forever
  auto inner = run_strategy(RuleSystem::beta(), Strategy::LeftmostOutermost,
                            tr("(\\x.x ((\\x.x x) (\\x.x x))) y"), 10);
  REQUIRE(inner.steps.size() == 2);  // root redex first, then Omega in argument position
  CHECK(inner.steps[1].position == Position{2});
  CHECK(inner.cycle_at == 1u);

  auto growing = run_strategy(RuleSystem::beta(), Strategy::LeftmostOutermost,
                              tr("(\\x.x x y) (\\x.x x y)"), 5);
  CHECK(growing.exhausted);
  CHECK(growing.steps.size() == 5);
  for (std::size_t i = 0; i < growing.steps.size(); ++i) CHECK(growing.steps[i].position.size() == i);

  auto d0 = run_strategy(RuleSystem::beta(), Strategy::DepthZeroFirst, tr("y ((\\x.x) z) ((\\x.x) w)"), 10);
  REQUIRE(d0.steps.size() == 2);
  CHECK(d0.steps[0].position == Position{2});

  auto po = run_strategy(RuleSystem::beta(), Strategy::ParallelOutermost, tr("y ((\\x.x) z) ((\\x.x) w)"), 10);
  REQUIRE(po.steps.size() == 2);
  CHECK(po.final_tree() == tr("y z w"));
}

TEST_CASE("replay with repetition") {
  auto t = tr("(\\x.x ((\\x.x x) (\\x.x x))) y");
  auto tr1 = replay(RuleSystem::beta(), t, {Position{1, 0, 2}}, 0);
  CHECK(tr1.cycle_at == 0u);
  CHECK(tr1.steps.size() == 1);
  auto tr2 = replay(RuleSystem::beta(), t, {Position{}, Position{2}});
  CHECK(tr2.final_tree() == tr("y ((\\x.x x) (\\x.x x))"));
  CHECK(tr2.is_closed());
  CHECK_THROWS_AS(replay(RuleSystem::beta(), t, {Position{2}}), StepError);
}
