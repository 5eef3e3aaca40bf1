#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ilc/developments.hpp"

namespace ilc::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random term with at most `size` nodes over free variables y, z.
inline Term random_term(Rng& rng, std::size_t size, bool allow_bot = true, std::vector<std::string> scope = {}) {
  if (size <= 1 || (size <= 3 && chance(rng, 0.15))) {
    // Bound variables are favoured so that contractions duplicate and erase.
    if (!scope.empty() && chance(rng, 0.6)) return Term::var(scope[pick(rng, scope.size())]);
    std::size_t k = pick(rng, 2 + (allow_bot ? 1 : 0));
    if (k == 0) return Term::var("y");
    if (k == 1) return Term::var("z");
    return Term::bot();
  }
  if (size == 2 || chance(rng, 0.35)) {
    std::string x = "x" + std::to_string(scope.size());
    scope.push_back(x);
    return Term::abs(x, random_term(rng, size - 1, allow_bot, scope));
  }
  std::size_t left = 1 + pick(rng, size - 2);
  Term f = random_term(rng, left, allow_bot, scope);
  // Bias towards redexes so that reductions have something to do.
  if (chance(rng, 0.6) && f.kind() != Term::Kind::Abs && left >= 2) {
    std::string x = "x" + std::to_string(scope.size());
    auto inner = scope;
    inner.push_back(x);
    f = Term::abs(x, random_term(rng, left - 1, allow_bot, inner));
  }
  return Term::app(f, random_term(rng, size - 1 - left, allow_bot, scope));
}

/// Random tree of at most `size` nodes with at least `min_redexes` β-redexes.
inline LambdaTree random_redex_tree(Rng& rng, std::size_t size, std::size_t min_redexes) {
  for (;;) {
    LambdaTree t = tree_of_term(random_term(rng, size));
    if (redexes(RuleSystem::beta(), t).size() >= min_redexes) return t;
  }
}

/// Every term with exactly `size` nodes whose leaves are bound variables in
/// scope, y, z or ⊥; calls `f` on each.
inline void enumerate_terms(std::size_t size, const std::function<void(const Term&)>& f,
                            std::vector<std::string> scope = {}) {
  if (size == 0) return;
  if (size == 1) {
    for (const auto& v : scope) f(Term::var(v));
    f(Term::var("y"));
    f(Term::var("z"));
    f(Term::bot());
    return;
  }
  std::string x = "x" + std::to_string(scope.size());
  auto inner = scope;
  inner.push_back(x);
  enumerate_terms(size - 1, [&](const Term& b) { f(Term::abs(x, b)); }, inner);
  for (std::size_t left = 1; left + 1 < size; ++left)
    enumerate_terms(left, [&](const Term& a) {
      enumerate_terms(size - 1 - left, [&](const Term& b) { f(Term::app(a, b)); }, scope);
    }, scope);
}

/// Random subset of dom(t) ∪ dom⊥(t) positions, each kept with probability p.
inline std::set<Position> random_positions(Rng& rng, const LambdaTree& t, double p, std::size_t max_len = 12) {
  std::set<Position> out;
  for (const auto& q : domain(t, max_len))
    if (chance(rng, p)) out.insert(q);
  return out;
}

/// Random finite reduction of at most `steps` steps choosing uniformly among redexes.
inline Trace random_trace(Rng& rng, const RuleSystem& rules, const LambdaTree& t, std::size_t steps) {
  std::vector<Position> ps;
  LambdaTree cur = t;
  for (std::size_t i = 0; i < steps; ++i) {
    auto rs = redexes(rules, cur, 24, 256);
    if (rs.empty()) break;
    const Redex& r = rs[pick(rng, rs.size())];
    Step s = try_step(rules, cur, r.position, r.rule);
    ps.push_back(r.position);
    cur = s.after;
  }
  return replay(rules, t, ps);
}

/// t with the subtree at a random position replaced by `sub`.
inline LambdaTree graft_random(Rng& rng, const LambdaTree& t, const LambdaTree& sub) {
  auto dom = domain(t, 16);
  if (dom.empty()) return sub;
  return replace_at(t, dom[pick(rng, dom.size())], sub);
}

/// Steps [from, to) of a finite trace as a trace of their own.
inline Trace slice(const Trace& t, std::size_t from, std::size_t to) {
  Trace s;
  s.sig = t.sig;
  s.rules = t.rules;
  s.strategy = t.strategy;
  s.start = from == 0 ? t.start : t.steps[from - 1].after;
  s.steps.assign(t.steps.begin() + from, t.steps.begin() + to);
  return s;
}

}  // namespace ilc::testing
