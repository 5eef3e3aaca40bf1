#include "ilc/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace ilc {

std::string rule_name(RuleTag tag) {
  switch (tag) {
    case RuleTag::Beta: return "beta";
    case RuleTag::Eta: return "eta";
    case RuleTag::Strict: return "S";
    case RuleTag::Bot: return "bot";
  }
  return "?";
}

RuleTag parse_rule_tag(const std::string& name) {
  if (name == "beta") return RuleTag::Beta;
  if (name == "eta") return RuleTag::Eta;
  if (name == "S") return RuleTag::Strict;
  if (name == "bot") return RuleTag::Bot;
  throw std::invalid_argument("unknown rule tag: " + name);
}

std::string RuleSystem::name() const {
  switch (kind_) {
    case Kind::Beta: return "beta";
    case Kind::Eta: return "eta";
    case Kind::Strict: return "strict";
    case Kind::BetaStrict: return "betas";
    case Kind::BohmBot: return "bohm";
  }
  return "?";
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::LeftmostOutermost: return "lmo";
    case Strategy::ParallelOutermost: return "po";
    case Strategy::DepthZeroFirst: return "d0";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "lmo") return Strategy::LeftmostOutermost;
  if (name == "po") return Strategy::ParallelOutermost;
  if (name == "d0") return Strategy::DepthZeroFirst;
  throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

/// Substitution and index shifting on a graph under construction. Nodes
/// below `cap` binders never contain indices that could be affected, so
/// memo states are capped and the original node is reused beyond that.
class Rewriter {
public:
  Rewriter(GraphBuilder& b, std::uint32_t cap) : b_(b), cap_(cap) {}

  // indices >= c move by s
  std::uint32_t shift(std::uint32_t n, int s, std::uint32_t c) {
    if (s == 0 || c > cap_) return n;
    auto key = std::make_tuple(n, s, c);
    if (auto it = shift_memo_.find(key); it != shift_memo_.end()) return it->second;
    TreeNode node = b_[n];
    switch (node.kind) {
      case NodeKind::BVar:
        if (node.value < c) return n;
        return shift_memo_[key] = b_.add(TreeNode::bvar(static_cast<std::uint32_t>(static_cast<int>(node.value) + s)));
      case NodeKind::Lam: {
        auto self = b_.add(node);
        shift_memo_[key] = self;
        auto child = shift(node.left, s, c + 1);
        b_[self].left = child;
        return self;
      }
      case NodeKind::App: {
        auto self = b_.add(node);
        shift_memo_[key] = self;
        auto l = shift(node.left, s, c);
        auto r = shift(node.right, s, c);
        b_[self].left = l;
        b_[self].right = r;
        return self;
      }
      default: return n;
    }
  }

  // body[d := arg] below d binders
  std::uint32_t subst(std::uint32_t n, std::uint32_t arg, std::uint32_t d) {
    if (d > cap_) return n;
    auto key = std::make_pair(n, d);
    if (auto it = subst_memo_.find(key); it != subst_memo_.end()) return it->second;
    TreeNode node = b_[n];
    switch (node.kind) {
      case NodeKind::BVar:
        if (node.value < d) return n;
        if (node.value == d) return subst_memo_[key] = shift(arg, static_cast<int>(d), 0);
        return subst_memo_[key] = b_.add(TreeNode::bvar(node.value - 1));
      case NodeKind::Lam: {
        auto self = b_.add(node);
        subst_memo_[key] = self;
        auto child = subst(node.left, arg, d + 1);
        b_[self].left = child;
        return self;
      }
      case NodeKind::App: {
        auto self = b_.add(node);
        subst_memo_[key] = self;
        auto l = subst(node.left, arg, d);
        auto r = subst(node.right, arg, d);
        b_[self].left = l;
        b_[self].right = r;
        return self;
      }
      default: return n;
    }
  }

private:
  GraphBuilder& b_;
  std::uint32_t cap_;
  std::map<std::tuple<std::uint32_t, int, std::uint32_t>, std::uint32_t> shift_memo_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> subst_memo_;
};

/// Does index d (seen from node n) occur free below n?
bool occurs(const LambdaTree& t, std::uint32_t n, std::uint32_t d) {
  const std::uint32_t cap = t.max_bvar_index();
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{n, d}};
  while (!work.empty()) {
    auto [id, depth] = work.back();
    work.pop_back();
    if (depth > cap || !seen.insert({id, depth}).second) continue;
    const TreeNode& node = t.node(id);
    if (node.kind == NodeKind::BVar && node.value == depth) return true;
    if (node.kind == NodeKind::Lam) work.emplace_back(node.left, depth + 1);
    if (node.kind == NodeKind::App) {
      work.emplace_back(node.left, depth);
      work.emplace_back(node.right, depth);
    }
  }
  return false;
}

bool is_strict_redex(const StrictnessSignature& sig, const LambdaTree& t, const TreeNode& n) {
  if (n.kind == NodeKind::Lam) return sig.strict(0) && t.node(n.left).kind == NodeKind::Hole;
  if (n.kind == NodeKind::App)
    return (sig.strict(1) && t.node(n.left).kind == NodeKind::Hole) ||
           (sig.strict(2) && t.node(n.right).kind == NodeKind::Hole);
  return false;
}

bool is_beta_redex(const LambdaTree& t, const TreeNode& n) {
  return n.kind == NodeKind::App && t.node(n.left).kind == NodeKind::Lam;
}

bool is_eta_redex(const LambdaTree& t, const TreeNode& n) {
  if (n.kind != NodeKind::Lam) return false;
  const TreeNode& body = t.node(n.left);
  if (body.kind != NodeKind::App) return false;
  const TreeNode& x = t.node(body.right);
  return x.kind == NodeKind::BVar && x.value == 0 && !occurs(t, body.left, 0);
}

/// Which rule (if any) applies at node id, by priority.
std::optional<RuleTag> node_redex(const RuleSystem& rules, const LambdaTree& t, std::uint32_t id) {
  const TreeNode& n = t.node(id);
  if (n.kind == NodeKind::Cut || n.kind == NodeKind::Unknown) return std::nullopt;
  if (rules.has_bot() && n.kind != NodeKind::Hole && rules.oracle() &&
      rules.oracle()->is_bot_instance(LambdaTree::from_graph(t.nodes(), id)))
    return RuleTag::Bot;
  if (rules.has_strict() && is_strict_redex(rules.sig(), t, n)) return RuleTag::Strict;
  if (rules.has_beta() && is_beta_redex(t, n)) return RuleTag::Beta;
  if (rules.has_eta() && is_eta_redex(t, n)) return RuleTag::Eta;
  return std::nullopt;
}

bool node_has(const RuleSystem& rules, const LambdaTree& t, std::uint32_t id, RuleTag tag) {
  const TreeNode& n = t.node(id);
  switch (tag) {
    case RuleTag::Bot:
      return rules.has_bot() && n.kind != NodeKind::Hole && n.kind != NodeKind::Cut &&
             n.kind != NodeKind::Unknown && rules.oracle() &&
             rules.oracle()->is_bot_instance(LambdaTree::from_graph(t.nodes(), id));
    case RuleTag::Strict: return rules.has_strict() && is_strict_redex(rules.sig(), t, n);
    case RuleTag::Beta: return rules.has_beta() && is_beta_redex(t, n);
    case RuleTag::Eta: return rules.has_eta() && is_eta_redex(t, n);
  }
  return false;
}

std::string describe(const TreeNode& n) {
  switch (n.kind) {
    case NodeKind::Hole: return "⊥";
    case NodeKind::Lam: return "λ";
    case NodeKind::App: return "@";
    case NodeKind::BVar: return "bound variable";
    case NodeKind::FVar: return "variable " + symbol_name(n.value);
    case NodeKind::Cut: return "cut";
    case NodeKind::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace

LambdaTree contract(const LambdaTree& t, const Position& p, RuleTag tag) {
  std::vector<std::uint32_t> path{0};
  for (auto d : p.digits()) path.push_back(t.node(path.back()).child(d));
  GraphBuilder b(t);
  Rewriter rw(b, t.max_bvar_index());
  const TreeNode redex = t.node(path.back());
  std::uint32_t current = 0;
  switch (tag) {
    case RuleTag::Bot:
    case RuleTag::Strict: current = b.hole(); break;
    case RuleTag::Beta: {
      const TreeNode lam = t.node(redex.left);
      current = rw.subst(lam.left, redex.right, 0);
      break;
    }
    case RuleTag::Eta: current = rw.shift(t.node(redex.left).left, -1, 0); break;
  }
  for (std::size_t k = p.size(); k-- > 0;) {
    TreeNode copy = t.node(path[k]);
    if (p[k] == 2) copy.right = current;
    else copy.left = current;
    current = b.add(copy);
  }
  return std::move(b).build(current);
}

namespace {

/// Nodes from which some redex node is reachable.
std::vector<bool> reaches(const LambdaTree& t, const std::vector<bool>& redex) {
  const auto& nodes = t.nodes();
  std::vector<std::vector<std::uint32_t>> parents(nodes.size());
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind == NodeKind::Lam) parents[nodes[i].left].push_back(i);
    if (nodes[i].kind == NodeKind::App) {
      parents[nodes[i].left].push_back(i);
      parents[nodes[i].right].push_back(i);
    }
  }
  std::vector<bool> out = redex;
  std::vector<std::uint32_t> work;
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    if (redex[i]) work.push_back(i);
  while (!work.empty()) {
    auto i = work.back();
    work.pop_back();
    for (auto p : parents[i])
      if (!out[p]) {
        out[p] = true;
        work.push_back(p);
      }
  }
  return out;
}

struct RedexMap {
  std::vector<std::optional<RuleTag>> tag;
  std::vector<bool> reach;
};

RedexMap redex_map(const RuleSystem& rules, const LambdaTree& t) {
  RedexMap m;
  std::vector<bool> is_redex(t.size());
  for (std::uint32_t i = 0; i < t.size(); ++i) {
    m.tag.push_back(node_redex(rules, t, i));
    is_redex[i] = m.tag.back().has_value();
  }
  m.reach = reaches(t, is_redex);
  return m;
}

/// Preorder enumeration of redex positions. `outermost` skips positions
/// below a redex.
std::vector<Redex> enumerate(const LambdaTree& t, const RedexMap& m, std::size_t max_len, std::size_t limit,
                             bool outermost) {
  std::vector<Redex> out;
  std::vector<std::size_t> fail(t.size(), SIZE_MAX);  // shortest remaining length known to yield nothing
  Position at;
  std::function<bool(std::uint32_t)> go = [&](std::uint32_t id) -> bool {
    if (out.size() >= limit) return true;
    if (!m.reach[id]) return false;
    std::size_t room = max_len - at.size();
    if (fail[id] != SIZE_MAX && room <= fail[id]) return false;
    bool found = false;
    if (m.tag[id]) {
      out.push_back({at, *m.tag[id]});
      found = true;
      if (outermost) return true;
    }
    const TreeNode& n = t.node(id);
    if (at.size() < max_len) {
      if (n.kind == NodeKind::Lam) {
        at.push(0);
        found |= go(n.left);
        at.pop();
      } else if (n.kind == NodeKind::App) {
        at.push(1);
        found |= go(n.left);
        at.pop();
        at.push(2);
        found |= go(n.right);
        at.pop();
      }
    }
    if (!found) fail[id] = std::max(fail[id] == SIZE_MAX ? 0 : fail[id], room);
    return found;
  };
  go(0);
  return out;
}

std::optional<Redex> first_redex(const LambdaTree& t, const RedexMap& m, std::size_t max_len) {
  auto found = enumerate(t, m, max_len, 1, true);
  if (found.empty()) return std::nullopt;
  return found.front();
}

/// Redex of least ā-depth, leftmost among those.
std::optional<Redex> shallowest_in(const StrictnessSignature& sig, const LambdaTree& t, const RedexMap& m,
                                      std::size_t max_len) {
  const std::size_t inf = SIZE_MAX;
  const auto& nodes = t.nodes();
  // least depth from each node to a redex, by 0-1 relaxation to a fixpoint
  std::vector<std::size_t> md(nodes.size(), inf);
  for (std::uint32_t i = 0; i < nodes.size(); ++i)
    if (m.tag[i]) md[i] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      if (m.tag[i]) continue;
      std::size_t best = md[i];
      auto relax = [&](std::uint32_t c, int edge) {
        if (md[c] != inf) best = std::min(best, md[c] + sig.weight(edge));
      };
      if (nodes[i].kind == NodeKind::Lam) relax(nodes[i].left, 0);
      if (nodes[i].kind == NodeKind::App) {
        relax(nodes[i].left, 1);
        relax(nodes[i].right, 2);
      }
      if (best < md[i]) {
        md[i] = best;
        changed = true;
      }
    }
  }
  if (md[0] == inf) return std::nullopt;
  // descend, keeping the remaining depth tight; the length bound guards
  // against zero-weight cycles in unguarded input
  Position at;
  std::uint32_t id = 0;
  std::size_t r = md[0];
  while (!m.tag[id]) {
    if (at.size() >= max_len) return std::nullopt;
    const TreeNode& n = nodes[id];
    bool moved = false;
    for (int e : {0, 1, 2}) {
      if (!n.has_child(e)) continue;
      auto c = n.child(e);
      if (md[c] != inf && md[c] + sig.weight(e) == r) {
        at.push(e);
        r = md[c];
        id = c;
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  return Redex{at, *m.tag[id]};
}

Step make_step(const RuleSystem& rules, const LambdaTree& t, const Position& p, RuleTag tag) {
  Step s;
  s.before = t;
  s.position = p;
  s.rule = tag;
  s.after = contract(t, p, tag);
  s.context = reduction_context(rules.sig(), t, p);
  s.depth = rules.sig().depth(p);
  if (!is_guarded(rules.sig(), s.after))
    throw TreeError("step at " + p.str() + " left the guarded trees for signature " + rules.sig().str());
  return s;
}

struct StateKey {
  LambdaTree tree;
  std::vector<Position> cursor;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::size_t h = k.tree.hash();
    for (const auto& p : k.cursor) h = h * 31 + PositionHash{}(p);
    return h;
  }
};

}  // namespace

LambdaTree substitute(const LambdaTree& body, const LambdaTree& arg) {
  GraphBuilder b;
  auto body_root = b.import(body);
  auto arg_root = b.import(arg);
  Rewriter rw(b, std::max(body.max_bvar_index(), arg.max_bvar_index()));
  auto root = rw.subst(body_root, arg_root, 0);
  return std::move(b).build(root);
}

std::optional<RuleTag> redex_at(const RuleSystem& rules, const LambdaTree& t, const Position& p) {
  auto id = t.find(p);
  if (!id) return std::nullopt;
  return node_redex(rules, t, *id);
}

std::vector<Redex> redexes(const RuleSystem& rules, const LambdaTree& t, std::size_t max_len, std::size_t limit) {
  return enumerate(t, redex_map(rules, t), max_len, limit, false);
}

std::optional<Redex> shallowest_redex(const RuleSystem& rules, const LambdaTree& t, std::size_t max_len) {
  return shallowest_in(rules.sig(), t, redex_map(rules, t), max_len);
}

Position acut(const StrictnessSignature& sig, const Position& p) { return sig.acut(p); }

LambdaTree reduction_context(const StrictnessSignature& sig, const LambdaTree& t, const Position& p) {
  return remove_at(t, sig.acut(p));
}

Step try_step(const RuleSystem& rules, const LambdaTree& t, const Position& p, std::optional<RuleTag> tag) {
  auto id = t.find(p);
  if (!id) throw StepError("position " + p.str() + " is not in the tree");
  if (tag) {
    if (!node_has(rules, t, *id, *tag))
      throw StepError("no " + rule_name(*tag) + "-redex at " + p.str() + ": label is " + describe(t.node(*id)));
    return make_step(rules, t, p, *tag);
  }
  auto found = node_redex(rules, t, *id);
  if (!found) throw StepError("not a redex at " + p.str() + ": label is " + describe(t.node(*id)));
  return make_step(rules, t, p, *found);
}

Trace run_strategy(const RuleSystem& rules, Strategy strategy, const LambdaTree& t, std::size_t fuel,
                   std::size_t max_len) {
  Trace tr;
  tr.sig = rules.sig();
  tr.rules = rules.name();
  tr.strategy = strategy_name(strategy);
  tr.start = t;
  std::unordered_map<StateKey, std::size_t, StateKeyHash> seen;
  std::deque<Position> pending;
  LambdaTree cur = t;
  auto cursor = [&] { return std::vector<Position>(pending.begin(), pending.end()); };
  seen.emplace(StateKey{cur, cursor()}, 0);
  for (;;) {
    if (tr.steps.size() >= fuel) {
      tr.exhausted = true;
      break;
    }
    std::optional<Redex> next;
    switch (strategy) {
      case Strategy::LeftmostOutermost: next = first_redex(cur, redex_map(rules, cur), max_len); break;
      case Strategy::DepthZeroFirst: next = shallowest_in(rules.sig(), cur, redex_map(rules, cur), max_len); break;
      case Strategy::ParallelOutermost: {
        if (pending.empty())
          for (auto& r : enumerate(cur, redex_map(rules, cur), max_len, 64, true)) pending.push_back(r.position);
        if (!pending.empty()) {
          Position p = pending.front();
          pending.pop_front();
          auto tag = redex_at(rules, cur, p);
          if (!tag) throw std::logic_error("parallel redex vanished at " + p.str());
          next = Redex{p, *tag};
        }
        break;
      }
    }
    if (!next) break;
    tr.steps.push_back(make_step(rules, cur, next->position, next->rule));
    cur = tr.steps.back().after;
    auto [it, fresh] = seen.emplace(StateKey{cur, cursor()}, tr.steps.size());
    if (!fresh) {
      tr.cycle_at = it->second;
      break;
    }
  }
  tr.fuel_spent = tr.steps.size();
  return tr;
}

Trace replay(const RuleSystem& rules, const LambdaTree& t, const std::vector<Position>& positions,
             std::optional<std::size_t> repeat_from, std::size_t fuel) {
  Trace tr;
  tr.sig = rules.sig();
  tr.rules = rules.name();
  tr.strategy = "replay";
  tr.start = t;
  LambdaTree cur = t;
  std::size_t k = 0;
  // state before each step, with the replay cursor once inside the repeated part
  std::vector<std::pair<LambdaTree, std::size_t>> states;
  auto lookup = [&]() -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].second == k && states[i].first == cur) return i;
    return std::nullopt;
  };
  for (;;) {
    if (k >= positions.size()) {
      if (!repeat_from || *repeat_from >= positions.size()) break;
      k = *repeat_from;
    }
    if (repeat_from && k >= *repeat_from) {
      if (auto i = lookup()) {
        tr.cycle_at = *i;
        break;
      }
      states.emplace_back(cur, k);
    } else {
      states.emplace_back(cur, SIZE_MAX);
    }
    if (tr.steps.size() >= fuel) {
      tr.exhausted = true;
      break;
    }
    tr.steps.push_back(try_step(rules, cur, positions[k]));
    cur = tr.steps.back().after;
    ++k;
  }
  tr.fuel_spent = tr.steps.size();
  return tr;
}

}  // namespace ilc
