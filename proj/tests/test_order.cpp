#include <doctest.h>

#include "ilc/order.hpp"

using namespace ilc;

namespace {
StrictnessSignature sig(const char* s) { return StrictnessSignature::parse(s); }
LambdaTree tr(const char* s) { return parse_tree(s); }
}  // namespace

TEST_CASE("tree_leq verdicts and witnesses") {
  auto v = tree_leq(sig("001"), tr("\\x.bot"), tr("\\x.x x"));
  CHECK(!v);
  CHECK(v.witness == Position{0});
  CHECK(tree_leq(sig("111"), tr("\\x.bot"), tr("\\x.x x")));
  CHECK(tree_leq(sig("001"), tr("\\x.x bot"), tr("\\x.x x")));
  CHECK(tree_leq(sig("111"), LambdaTree(), tr("rec M. M y")));

  auto w = tree_leq(sig("101"), tr("bot y"), tr("x y"));
  CHECK(!w);
  CHECK(w.witness == Position{1});

  auto label = tree_leq(sig("111"), tr("x y"), tr("x z"));
  CHECK(label.witness == Position{2});

  // infinite trees
  CHECK(tree_leq(sig("111"), tr("bot y y"), tr("rec M. M y")));
  CHECK(!tree_leq(sig("111"), tr("rec M. M y"), tr("bot y y")));
}

TEST_CASE("glb table") {
  std::vector<LambdaTree> ts{tr("\\x.x y"), tr("\\x.y x")};
  CHECK(glb(sig("011"), ts) == tr("\\x.bot bot"));
  CHECK(glb(sig("110"), ts) == tr("\\x.bot"));
  CHECK(glb(sig("001"), ts) == LambdaTree());
  CHECK(glb(sig("111"), {tr("x y")}) == tr("x y"));
  CHECK_THROWS(glb(sig("111"), {}));
  // glb of a cycle and its unfolding
  CHECK(glb(sig("111"), {tr("rec M. M y"), tr("rec M. M y y")}) == tr("rec M. M y"));
  CHECK(glb(sig("111"), {tr("rec M. M y"), tr("rec M. M z")}) == tr("rec M. M bot"));
}

TEST_CASE("glb excluding a position") {
  auto t = tr("(\\x.x ((\\z.z z) (\\z.z z))) y");
  CHECK(glb_excluding(sig("111"), {t, t}, Position{1, 0, 2}) == tr("(\\x.x bot) y"));
  CHECK(glb_excluding(sig("011"), {t}, Position{1, 0, 2}) == tr("(\\x.x bot) y"));
  CHECK(glb_excluding(sig("110"), {t}, Position{1, 0, 2}) == tr("(\\x.bot) y"));
  CHECK(glb_excluding(sig("010"), {t}, Position{1, 0, 2}) == tr("bot y"));
  CHECK(glb_excluding(sig("000"), {t}, Position{1, 0, 2}) == LambdaTree());
}

TEST_CASE("lub of chains") {
  CHECK(lub_chain(sig("111"), {LambdaTree(), tr("\\x.bot"), tr("\\x.x")}) == tr("\\x.x"));
  CHECK(lub_chain(sig("101"), {LambdaTree()}) == LambdaTree());
  CHECK(lub_chain(sig("111"), {tr("x bot"), tr("x y")}) == tr("x y"));
  try {
    lub_chain(sig("111"), {tr("x bot"), tr("x y"), tr("x z")});
    FAIL("expected a chain error");
  } catch (const ChainError& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("liminf sources") {
  auto s = sig("011");
  LassoSequence lasso{{tr("z")}, {tr("\\x.x y"), tr("\\x.y x")}};
  CHECK(liminf_approx(s, lasso, 8, 100).tree == tr("\\x.bot bot"));
  CHECK(liminf_approx(s, FiniteSequence{{tr("a"), tr("b")}}, 8, 100).tree == tr("b"));

  // constant generator
  auto t = tr("\\x.x y");
  GeneratedSequence constant{[&] { return std::optional<LambdaTree>(t); }};
  auto a = liminf_approx(s, constant, 4, 1000);
  CHECK(a.exact());
  CHECK(a.tree == t);

  // growing unfoldings of rec M. M y converge to the truncation
  int n = 0;
  GeneratedSequence growing{[&] {
    ++n;
    std::string text = "bot";
    for (int i = 0; i < n; ++i) text = "(" + text + ") y";
    return std::optional<LambdaTree>(tr(text.c_str()));
  }};
  auto g = liminf_approx(sig("111"), growing, 3, 1000);
  CHECK(g.tree == truncate_marked(sig("111"), tr("rec M. M y"), 3));
  CHECK(g.tree.has_cut());
}
