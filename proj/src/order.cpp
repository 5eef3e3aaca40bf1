#include "ilc/order.hpp"

#include <deque>
#include <map>
#include <unordered_map>

namespace ilc {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const noexcept {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

constexpr int kEdges[3] = {0, 1, 2};

int arity_edges(const TreeNode& n, int* out) {
  if (n.kind == NodeKind::Lam) {
    out[0] = 0;
    return 1;
  }
  if (n.kind == NodeKind::App) {
    out[0] = 1;
    out[1] = 2;
    return 2;
  }
  return 0;
}

/// Product of several trees, optionally tracking how much of an excluded
/// position has been followed. The last key entry is that progress counter.
struct Product {
  const std::vector<LambdaTree>& ts;
  std::optional<Position> excluded;
  std::uint32_t off;  // progress value once the walk has left the excluded path

  std::map<std::vector<std::uint32_t>, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> states;

  Product(const std::vector<LambdaTree>& trees, std::optional<Position> ex)
      : ts(trees), excluded(std::move(ex)), off(excluded ? static_cast<std::uint32_t>(excluded->size() + 1) : 0) {}

  std::uint32_t intern(std::vector<std::uint32_t> key) {
    auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(states.size()));
    if (fresh) states.push_back(std::move(key));
    return it->second;
  }

  const TreeNode& node(std::uint32_t state, std::size_t member) const {
    return ts[member].node(states[state][member]);
  }

  bool forbidden(std::uint32_t state) const {
    return excluded && states[state].back() == excluded->size();
  }

  std::vector<std::uint32_t> child_key(std::uint32_t state, int edge) const {
    const auto& key = states[state];
    std::vector<std::uint32_t> next(key.size());
    for (std::size_t m = 0; m < ts.size(); ++m) {
      const TreeNode& n = ts[m].node(key[m]);
      next[m] = n.has_child(edge) ? n.child(edge) : 0;  // Hole children never read
    }
    std::uint32_t k = key.back();
    if (excluded) {
      if (k < excluded->size() && (*excluded)[k] == edge) next.back() = k + 1;
      else next.back() = off;
    } else {
      next.back() = 0;
    }
    return next;
  }

  bool unanimous(std::uint32_t state) const {
    const TreeNode& first = node(state, 0);
    if (first.kind == NodeKind::Hole) return false;
    for (std::size_t m = 1; m < ts.size(); ++m)
      if (!node(state, m).same_label(first)) return false;
    return true;
  }

  bool member_has_child(std::uint32_t state, int edge) const {
    // child along edge is non-Hole in some member
    for (std::size_t m = 0; m < ts.size(); ++m) {
      const TreeNode& n = node(state, m);
      if (n.has_child(edge) && ts[m].node(n.child(edge)).kind != NodeKind::Hole) return true;
    }
    return false;
  }
};

LambdaTree glb_impl(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts, std::optional<Position> excluded) {
  if (ts.empty()) throw std::invalid_argument("glb of an empty set");
  Product prod(ts, std::move(excluded));
  std::vector<std::uint32_t> root(ts.size() + 1, 0);
  prod.intern(root);

  // explore unanimous states; record children
  std::vector<std::array<std::int64_t, 3>> children;
  std::vector<bool> good;
  for (std::uint32_t s = 0; s < prod.states.size(); ++s) {
    children.push_back({-1, -1, -1});
    bool ok = prod.unanimous(s) && !prod.forbidden(s);
    good.push_back(ok);
    if (!ok) continue;
    int edges[2];
    int count = arity_edges(prod.node(s, 0), edges);
    for (int e = 0; e < count; ++e) children[s][edges[e]] = prod.intern(prod.child_key(s, edges[e]));
  }

  // greatest fixpoint: a strict child that is defined somewhere must survive
  for (bool changed = true; changed;) {
    changed = false;
    for (std::uint32_t s = 0; s < prod.states.size(); ++s) {
      if (!good[s]) continue;
      for (int e : kEdges) {
        if (children[s][e] < 0 || !sig.strict(e)) continue;
        auto c = static_cast<std::uint32_t>(children[s][e]);
        if (!good[c] && prod.member_has_child(s, e)) {
          good[s] = false;
          changed = true;
          break;
        }
      }
    }
  }

  if (!good[0]) return LambdaTree();
  GraphBuilder b;
  std::vector<std::uint32_t> id(prod.states.size(), 0);
  for (std::uint32_t s = 0; s < prod.states.size(); ++s)
    if (good[s]) id[s] = b.add(prod.node(s, 0));
  for (std::uint32_t s = 0; s < prod.states.size(); ++s) {
    if (!good[s]) continue;
    for (int e : kEdges) {
      if (children[s][e] < 0) continue;
      auto c = static_cast<std::uint32_t>(children[s][e]);
      std::uint32_t target = good[c] ? id[c] : b.hole();
      if (e == 2) b[id[s]].right = target;
      else b[id[s]].left = target;
    }
  }
  return std::move(b).build(id[0]);
}

}  // namespace

OrderVerdict tree_leq(const StrictnessSignature& sig, const LambdaTree& s, const LambdaTree& t) {
  using State = std::pair<std::uint32_t, std::uint32_t>;
  std::unordered_map<State, bool, PairHash> seen;
  std::deque<std::pair<State, Position>> queue{{{0, 0}, Position{}}};
  while (!queue.empty()) {
    auto [st, pos] = queue.front();
    queue.pop_front();
    if (!seen.emplace(st, true).second) continue;
    const TreeNode& a = s.node(st.first);
    const TreeNode& b = t.node(st.second);
    if (a.kind == NodeKind::Hole) continue;
    if (!a.same_label(b)) return {false, pos};
    int edges[2];
    int count = arity_edges(a, edges);
    for (int k = 0; k < count; ++k) {
      int e = edges[k];
      bool in_s = s.node(a.child(e)).kind != NodeKind::Hole;
      bool in_t = t.node(b.child(e)).kind != NodeKind::Hole;
      if (sig.strict(e) && in_t && !in_s) return {false, pos.child(e)};
      if (in_s) queue.push_back({{a.child(e), b.child(e)}, pos.child(e)});
    }
  }
  return {true, std::nullopt};
}

LambdaTree glb(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts) {
  if (ts.size() == 1) return ts.front();
  return glb_impl(sig, ts, std::nullopt);
}

LambdaTree glb_excluding(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts, const Position& excluded) {
  return glb_impl(sig, ts, excluded);
}

LambdaTree lub_chain(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts) {
  if (ts.empty()) throw std::invalid_argument("lub of an empty chain");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!tree_leq(sig, ts[i - 1], ts[i]))
      throw ChainError("not a chain: element " + std::to_string(i - 1) + " is not below element " + std::to_string(i), i);

  // union of domains, labels from the first member defining the position
  Product prod(ts, std::nullopt);
  prod.intern(std::vector<std::uint32_t>(ts.size() + 1, 0));
  GraphBuilder b;
  std::vector<std::uint32_t> id;
  std::vector<std::array<std::int64_t, 3>> children;
  for (std::uint32_t s = 0; s < prod.states.size(); ++s) {
    children.push_back({-1, -1, -1});
    TreeNode label = TreeNode::hole();
    for (std::size_t m = 0; m < ts.size(); ++m)
      if (prod.node(s, m).kind != NodeKind::Hole) {
        label = prod.node(s, m);
        break;
      }
    id.push_back(b.add(label));
    int edges[2];
    int count = arity_edges(label, edges);
    for (int e = 0; e < count; ++e) children[s][edges[e]] = prod.intern(prod.child_key(s, edges[e]));
  }
  for (std::uint32_t s = 0; s < prod.states.size(); ++s)
    for (int e : kEdges) {
      if (children[s][e] < 0) continue;
      auto target = id[static_cast<std::uint32_t>(children[s][e])];
      if (e == 2) b[id[s]].right = target;
      else b[id[s]].left = target;
    }
  return std::move(b).build(id[0]);
}

LambdaTree truncate_marked(const StrictnessSignature& sig, const LambdaTree& t, std::size_t d) {
  if (!is_guarded(sig, t)) throw TreeError("truncate: tree is not guarded for signature " + sig.str());
  GraphBuilder b(t);
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> memo;
  std::function<std::uint32_t(std::uint32_t, std::size_t)> go = [&](std::uint32_t id, std::size_t depth) {
    const TreeNode node = t.node(id);
    if (depth >= d) return node.kind == NodeKind::Hole ? id : b.add(TreeNode::cut());
    if (node.is_leaf()) return id;
    auto key = std::make_pair(id, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    TreeNode copy = node;
    if (node.kind == NodeKind::Lam) {
      copy.left = go(node.left, depth + sig.weight(0));
    } else {
      copy.left = go(node.left, depth + sig.weight(1));
      copy.right = go(node.right, depth + sig.weight(2));
    }
    return memo[key] = b.add(copy);
  };
  auto root = go(0, 0);
  return std::move(b).build(root);
}

namespace {

/// b where it agrees with a, Unknown where the two labels differ.
LambdaTree mark_disagreement(const LambdaTree& a, const LambdaTree& b) {
  using State = std::pair<std::uint32_t, std::uint32_t>;
  GraphBuilder g;
  std::map<State, std::uint32_t> id;
  std::function<std::uint32_t(State)> go = [&](State st) {
    if (auto it = id.find(st); it != id.end()) return it->second;
    const TreeNode& x = a.node(st.first);
    const TreeNode& y = b.node(st.second);
    if (!x.same_label(y)) return id[st] = g.add(TreeNode::unknown());
    auto self = g.add(y);
    id[st] = self;
    if (y.kind == NodeKind::Lam) {
      auto c = go({x.left, y.left});
      g[self].left = c;
    } else if (y.kind == NodeKind::App) {
      auto l = go({x.left, y.left});
      auto r = go({x.right, y.right});
      g[self].left = l;
      g[self].right = r;
    }
    return self;
  };
  auto root = go({0, 0});
  return std::move(g).build(root);
}

}  // namespace

Approximant liminf_approx(const StrictnessSignature& sig, const SequenceSource& seq, std::size_t depth,
                          std::size_t fuel) {
  if (auto* f = std::get_if<FiniteSequence>(&seq)) {
    if (f->items.empty()) throw std::invalid_argument("liminf of an empty sequence");
    return {f->items.back(), 0};
  }
  if (auto* l = std::get_if<LassoSequence>(&seq)) {
    if (l->period.empty()) {
      if (l->prefix.empty()) throw std::invalid_argument("liminf of an empty sequence");
      return {l->prefix.back(), 0};
    }
    return {glb(sig, l->period), 0};
  }
  const auto& gen = std::get<GeneratedSequence>(seq);
  const std::size_t window = 2 * std::max<std::size_t>(depth, 1);
  std::deque<LambdaTree> recent;  // last 2*window elements
  std::size_t consumed = 0;
  while (consumed < fuel) {
    auto item = gen.next();
    if (!item) {
      if (recent.empty()) throw std::invalid_argument("liminf of an empty sequence");
      return {recent.back(), consumed};
    }
    ++consumed;
    recent.push_back(std::move(*item));
    if (recent.size() > 2 * window) recent.pop_front();
    if (recent.size() == 2 * window && consumed % window == 0) {
      auto a = liminf_window(sig, {recent.begin(), recent.end()}, depth);
      if (!a.tree.has_unknown()) return {a.tree, consumed};
    }
  }
  auto a = liminf_window(sig, {recent.begin(), recent.end()}, depth);
  a.fuel_spent = consumed;
  return a;
}

Approximant liminf_window(const StrictnessSignature& sig, const std::vector<LambdaTree>& items, std::size_t depth) {
  if (items.empty()) return {LambdaTree::leaf(TreeNode::unknown()), 0};
  const std::size_t window = 2 * std::max<std::size_t>(depth, 1);
  std::vector<LambdaTree> shorter, longer;
  if (items.size() >= 2 * window) {
    shorter.assign(items.end() - static_cast<std::ptrdiff_t>(window), items.end());
    longer.assign(items.end() - static_cast<std::ptrdiff_t>(2 * window), items.end());
  } else {
    shorter.assign(items.end() - 1, items.end());
    longer = items;
  }
  auto a = truncate_marked(sig, glb(sig, shorter), depth);
  auto b = truncate_marked(sig, glb(sig, longer), depth);
  if (a == b) return {a, items.size()};
  return {mark_disagreement(a, b), items.size()};
}

}  // namespace ilc
