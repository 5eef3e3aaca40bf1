#include "ilc/meaningless.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <unordered_map>

#include "ilc/order.hpp"

namespace ilc {

namespace {

constexpr std::size_t kSizeCap = 20000;

Position ones(std::size_t n) {
  Position p;
  for (std::size_t i = 0; i < n; ++i) p.push(1);
  return p;
}

/// Walks the depth-0 region of a tree, driving each application in it to
/// weak head normal form by spine reduction.
class RegionAnalysis {
public:
  enum class Outcome { Done, Destructive, Depth0, OutOfFuel };

  RegionAnalysis(const StrictnessSignature& sig, LambdaTree t, std::size_t fuel, bool stop_at_depth0,
                 RegionOrder order)
      : sig_(sig), cur_(std::move(t)), fuel_(fuel), stop_at_depth0_(stop_at_depth0), order_(order) {}

  Outcome run() { return analyze(Position{}); }

  const LambdaTree& tree() const { return cur_; }
  const std::vector<Position>& steps() const { return steps_; }
  std::size_t fuel_spent() const { return spent_; }
  void fill_loop(TriVerdict& v) const {
    v.loop_start = loop_start_;
    v.loop_anchor = loop_anchor_;
    v.loop_height = loop_height_;
    v.loop_shift = loop_shift_;
  }

private:
  enum class Whnf { Lam, Stuck, Destructive, Depth0, OutOfFuel };

  Outcome analyze(const Position& q) {
    if (++visits_ > fuel_ + 64) return Outcome::OutOfFuel;
    auto id = cur_.find(q);
    if (!id) return Outcome::Done;
    const TreeNode n = cur_.node(*id);
    switch (n.kind) {
      case NodeKind::Lam: return sig_.strict(0) ? analyze(q.child(0)) : Outcome::Done;
      case NodeKind::App: {
        switch (whnf(q)) {
          case Whnf::Lam: return analyze(q);
          case Whnf::Destructive: return Outcome::Destructive;
          case Whnf::Depth0: return Outcome::Depth0;
          case Whnf::OutOfFuel: return Outcome::OutOfFuel;
          case Whnf::Stuck: break;
        }
        auto after = cur_.find(q);
        if (!after || cur_.node(*after).kind != NodeKind::App) return analyze(q);
        int first = order_ == RegionOrder::LeftFirst ? 1 : 2;
        for (int e : {first, 3 - first}) {
          if (!sig_.strict(e)) continue;
          auto r = analyze(q.child(e));
          if (r != Outcome::Done) return r;
        }
        return Outcome::Done;
      }
      case NodeKind::Cut:
      case NodeKind::Unknown: return Outcome::OutOfFuel;
      default: return Outcome::Done;
    }
  }

  struct Entry {
    LambdaTree key;
    std::size_t height;
    std::size_t step;
  };

  Whnf whnf(const Position& q) {
    std::vector<Entry> stack;
    std::unordered_map<LambdaTree, std::vector<std::size_t>, LambdaTreeHash> where;
    for (;;) {
      auto id = cur_.find(q);
      if (!id) return Whnf::Stuck;
      if (cur_.node(*id).kind == NodeKind::Lam) return Whnf::Lam;
      // bottom redex on the left spine
      std::uint32_t n = *id;
      std::size_t h = 0;
      std::vector<bool> seen(cur_.size(), false);
      bool found = false;
      while (cur_.node(n).kind == NodeKind::App) {
        seen[n] = true;
        std::uint32_t l = cur_.node(n).left;
        if (cur_.node(l).kind == NodeKind::Lam) {
          found = true;
          break;
        }
        if (seen[l]) break;  // infinite spine without a head
        n = l;
        ++h;
      }
      if (!found) {
        auto head = cur_.node(n).kind == NodeKind::App ? cur_.node(cur_.node(n).left).kind : cur_.node(n).kind;
        if (head == NodeKind::Cut || head == NodeKind::Unknown) return Whnf::OutOfFuel;
        return Whnf::Stuck;
      }
      if (h == 0 || !sig_.a(1)) {
        if (stop_at_depth0_) return Whnf::Depth0;
      }
      LambdaTree key = LambdaTree::from_graph(cur_.nodes(), n);
      while (!stack.empty() && stack.back().height > h) {
        auto& list = where[stack.back().key];
        list.pop_back();
        stack.pop_back();
      }
      if (auto it = where.find(key); it != where.end() && !it->second.empty()) {
        const Entry& e = stack[it->second.back()];
        bool destructive = !sig_.a(1) || (e.height == 0 && h == 0);
        if (!destructive) return Whnf::Stuck;
        loop_start_ = e.step;
        loop_anchor_ = q;
        loop_height_ = e.height;
        loop_shift_ = h - e.height;
        return Whnf::Destructive;
      }
      where[key].push_back(stack.size());
      stack.push_back({std::move(key), h, steps_.size()});
      if (spent_ >= fuel_ || cur_.size() > kSizeCap) return Whnf::OutOfFuel;
      Position p = q.concat(ones(h));
      cur_ = contract(cur_, p, RuleTag::Beta);
      steps_.push_back(p);
      ++spent_;
    }
  }

  StrictnessSignature sig_;
  LambdaTree cur_;
  std::size_t fuel_;
  bool stop_at_depth0_;
  RegionOrder order_;
  std::vector<Position> steps_;
  std::size_t spent_ = 0;
  std::size_t visits_ = 0;
  std::optional<std::size_t> loop_start_;
  Position loop_anchor_;
  std::size_t loop_height_ = 0;
  std::size_t loop_shift_ = 0;
};

TriVerdict active_with_order(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel, RegionOrder order) {
  RegionAnalysis a(sig, t, fuel, false, order);
  auto outcome = a.run();
  TriVerdict v;
  v.start = t;
  v.steps = a.steps();
  v.reduct = a.tree();
  v.fuel_spent = a.fuel_spent();
  switch (outcome) {
    case RegionAnalysis::Outcome::Destructive:
      v.value = Tri::Yes;
      a.fill_loop(v);
      break;
    case RegionAnalysis::Outcome::Done: v.value = Tri::No; break;
    default: v.value = Tri::Unknown; break;
  }
  return v;
}

/// t with every Hole replaced by Ω.
LambdaTree fill_with_omega(const LambdaTree& t) {
  std::vector<TreeNode> nodes = t.nodes();
  auto base = static_cast<std::uint32_t>(nodes.size());
  // base: App(w, w); base+1: w = Lam(base+2); base+2: App(base+3, base+3); base+3: BVar 0
  nodes.push_back(TreeNode::app(base + 1, base + 1));
  nodes.push_back(TreeNode::lam(base + 2));
  nodes.push_back(TreeNode::app(base + 3, base + 3));
  nodes.push_back(TreeNode::bvar(0));
  auto redirect = [&](std::uint32_t c) { return t.node(c).kind == NodeKind::Hole ? base : c; };
  for (std::uint32_t i = 0; i < base; ++i) {
    if (nodes[i].kind == NodeKind::Lam) nodes[i].left = redirect(nodes[i].left);
    if (nodes[i].kind == NodeKind::App) {
      nodes[i].left = redirect(nodes[i].left);
      nodes[i].right = redirect(nodes[i].right);
    }
  }
  return LambdaTree::from_graph(std::move(nodes), t.is_bot() ? base : 0);
}

class ActiveOracle : public BotOracle {
public:
  ActiveOracle(StrictnessSignature sig, std::size_t fuel) : sig_(sig), fuel_(fuel) {}

  bool is_bot_instance(const LambdaTree& subtree) const override {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(subtree); it != memo_.end()) return it->second;
    }
    bool yes = in_bot_instances(sig_, subtree, fuel_).value == Tri::Yes;
    std::lock_guard lock(mutex_);
    memo_.emplace(subtree, yes);
    return yes;
  }

private:
  StrictnessSignature sig_;
  std::size_t fuel_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<LambdaTree, bool, LambdaTreeHash> memo_;
};

}  // namespace

Trace witness_trace(const StrictnessSignature& sig, const TriVerdict& v, std::size_t repetitions) {
  auto rules = RuleSystem::beta(sig);
  if (!v.loop_start) return replay(rules, v.start, v.steps);
  if (v.loop_shift == 0) return replay(rules, v.start, v.steps, v.loop_start, v.steps.size() * (repetitions + 1) + 1);
  std::vector<Position> unrolled = v.steps;
  const std::size_t skip = v.loop_anchor.size() + v.loop_height;
  for (std::size_t k = 1; k <= repetitions; ++k)
    for (std::size_t i = *v.loop_start; i < v.steps.size(); ++i) {
      Position p = v.loop_anchor.concat(ones(v.loop_height + k * v.loop_shift)).concat(v.steps[i].drop(skip));
      unrolled.push_back(p);
    }
  auto trace = replay(rules, v.start, unrolled);
  trace.exhausted = true;  // a prefix of an infinite reduction
  return trace;
}

TriVerdict is_stable(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel) {
  RegionAnalysis a(sig, t, fuel, true, RegionOrder::LeftFirst);
  auto outcome = a.run();
  TriVerdict v;
  v.start = t;
  v.steps = a.steps();
  v.reduct = a.tree();
  v.fuel_spent = a.fuel_spent();
  switch (outcome) {
    case RegionAnalysis::Outcome::Depth0: v.value = Tri::No; break;
    case RegionAnalysis::Outcome::Done: v.value = Tri::Yes; break;
    default: v.value = Tri::Unknown; break;
  }
  return v;
}

TriVerdict is_active(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel) {
  return active_with_order(sig, t, fuel, RegionOrder::LeftFirst);
}

TriVerdict in_bot_instances(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel) {
  if (t.is_bot()) {
    TriVerdict v;
    v.value = Tri::No;
    v.start = t;
    v.reduct = t;
    return v;
  }
  return is_active(sig, t.has_hole() ? fill_with_omega(t) : t, fuel);
}

LambdaTree strict_nf(const StrictnessSignature& sig, const LambdaTree& t) {
  const auto& nodes = t.nodes();
  std::vector<bool> collapse(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) collapse[i] = nodes[i].kind == NodeKind::Hole;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (collapse[i]) continue;
      const TreeNode& n = nodes[i];
      bool c = (n.kind == NodeKind::Lam && sig.strict(0) && collapse[n.left]) ||
               (n.kind == NodeKind::App &&
                ((sig.strict(1) && collapse[n.left]) || (sig.strict(2) && collapse[n.right])));
      if (c) {
        collapse[i] = true;
        changed = true;
      }
    }
  }
  if (collapse[0]) return LambdaTree();
  auto out = nodes;
  bool any = false;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (collapse[i] && out[i].kind != NodeKind::Hole) {
      out[i] = TreeNode::hole();
      any = true;
    }
  return any ? LambdaTree::from_graph(std::move(out), 0) : t;
}

Approximant bohm_tree(const StrictnessSignature& sig, const LambdaTree& t, std::size_t depth, std::size_t fuel,
                      RegionOrder order, bool collapse_strict) {
  struct KeyHash {
    std::size_t operator()(const std::pair<LambdaTree, std::size_t>& k) const noexcept {
      return k.first.hash() * 1000003u + k.second;
    }
  };
  GraphBuilder b;
  std::unordered_map<std::pair<LambdaTree, std::size_t>, std::uint32_t, KeyHash> memo;
  std::unordered_map<LambdaTree, TriVerdict, LambdaTreeHash> verdicts;
  std::size_t spent = 0;

  std::function<std::uint32_t(const LambdaTree&, std::size_t)> build = [&](const LambdaTree& u, std::size_t d) {
    if (u.is_bot()) return b.hole();
    if (d >= depth) return b.add(TreeNode::cut());
    auto key = std::make_pair(u, d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto vit = verdicts.find(u);
    if (vit == verdicts.end()) {
      vit = verdicts.emplace(u, active_with_order(sig, u, fuel, order)).first;
      spent += vit->second.fuel_spent;
    }
    const TriVerdict& v = vit->second;
    std::uint32_t result;
    if (v.value == Tri::Yes) {
      result = b.hole();
    } else if (v.value == Tri::Unknown) {
      result = b.add(TreeNode::unknown());
    } else {
      const LambdaTree reduct = v.reduct;
      // emit the depth-0 region, recursing one level deeper across non-strict edges
      std::map<std::uint32_t, std::uint32_t> emitted;
      std::function<std::uint32_t(std::uint32_t)> region = [&](std::uint32_t id) -> std::uint32_t {
        if (auto it = emitted.find(id); it != emitted.end()) return it->second;
        TreeNode n = reduct.node(id);
        if (n.kind == NodeKind::Hole) return b.hole();
        auto self = b.add(n);
        emitted[id] = self;
        auto child = [&](int e) {
          std::uint32_t c = n.child(e);
          if (sig.strict(e)) return region(c);
          return build(LambdaTree::from_graph(reduct.nodes(), c), d + 1);
        };
        if (n.kind == NodeKind::Lam) {
          auto c = child(0);
          b[self].left = c;
        } else if (n.kind == NodeKind::App) {
          auto l = child(1);
          auto r = child(2);
          b[self].left = l;
          b[self].right = r;
        }
        return self;
      };
      result = region(0);
    }
    memo[key] = result;
    return result;
  };
  auto root = build(t, 0);
  Approximant a;
  a.tree = std::move(b).build(root);
  if (collapse_strict) a.tree = strict_nf(sig, a.tree);
  a.fuel_spent = spent;
  a.canonical = sig.canonical();
  return a;
}

std::shared_ptr<const BotOracle> make_bot_oracle(const StrictnessSignature& sig, std::size_t fuel) {
  return std::make_shared<ActiveOracle>(sig, fuel);
}

Approximant m_route_normalize(const StrictnessSignature& sig, const LambdaTree& t, std::size_t depth,
                              std::size_t fuel) {
  constexpr std::size_t kMaxLen = 64;
  constexpr std::size_t kMaxVisits = 200000;
  // ⊥-verdicts draw on one pool shared by all calls, separate from the
  // contraction budget, so a growing subtree cannot stall every step.
  std::unordered_map<LambdaTree, Tri, LambdaTreeHash> memo;
  std::size_t oracle_pool = fuel;
  auto bot_verdict = [&](const LambdaTree& sub) {
    if (auto it = memo.find(sub); it != memo.end()) return it->second;
    if (oracle_pool == 0) return Tri::Unknown;
    TriVerdict v = in_bot_instances(sig, sub, oracle_pool);
    oracle_pool -= std::min(oracle_pool, v.fuel_spent);
    memo.emplace(sub, v.value);
    return v.value;
  };

  struct Found {
    Position position;
    RuleTag rule;
  };
  // Shallowest redex above the bound (leftmost among those); positions whose
  // ⊥-verdict stays open are collected on the way.
  auto search = [&](const LambdaTree& cur, std::vector<Position>& undecided) -> std::optional<Found> {
    std::vector<std::optional<Tri>> by_node(cur.size());
    std::size_t visits = 0;
    for (std::size_t d = 0; d < depth; ++d) {
      std::optional<Found> hit;
      Position at;
      std::function<void(std::uint32_t, std::size_t)> go = [&](std::uint32_t id, std::size_t here) {
        if (hit || ++visits > kMaxVisits) return;
        const TreeNode& n = cur.node(id);
        if (n.kind == NodeKind::Hole || n.kind == NodeKind::Cut || n.kind == NodeKind::Unknown) return;
        if (here == d) {
          if (!by_node[id]) by_node[id] = bot_verdict(LambdaTree::from_graph(cur.nodes(), id));
          if (*by_node[id] == Tri::Yes) {
            hit = Found{at, RuleTag::Bot};
            return;
          }
          if (*by_node[id] == Tri::Unknown) undecided.push_back(at);
          if (n.kind == NodeKind::App && cur.node(n.left).kind == NodeKind::Lam) {
            hit = Found{at, RuleTag::Beta};
            return;
          }
        }
        if (at.size() >= kMaxLen) return;
        for (int e = 0; e <= 2; ++e) {
          if (!n.has_child(e)) continue;
          std::size_t next = here + sig.weight(e);
          if (next > d) continue;
          at.push(e);
          go(n.child(e), next);
          at.pop();
        }
      };
      go(LambdaTree::root(), 0);
      if (hit) return hit;
    }
    return std::nullopt;
  };

  LambdaTree cur = t;
  std::size_t steps = 0;
  bool exhausted = false;
  std::vector<Position> undecided;
  for (;;) {
    undecided.clear();
    auto r = search(cur, undecided);
    if (!r) break;
    if (steps >= fuel) {
      exhausted = true;
      break;
    }
    cur = contract(cur, r->position, r->rule);
    ++steps;
  }

  // Mark what the run could not settle, outermost first.
  std::vector<Position> open;
  if (exhausted) {
    // Out of fuel: only regions known to be stable keep their labels.
    Position at;
    std::function<void(std::uint32_t, std::size_t)> sweep = [&](std::uint32_t id, std::size_t here) {
      const TreeNode& n = cur.node(id);
      if (here >= depth || n.is_leaf()) return;
      if (is_stable(sig, LambdaTree::from_graph(cur.nodes(), id), fuel).value != Tri::Yes) {
        open.push_back(at);
        return;
      }
      if (at.size() >= kMaxLen) return;
      for (int e = 0; e <= 2; ++e) {
        if (!n.has_child(e)) continue;
        at.push(e);
        sweep(n.child(e), here + sig.weight(e));
        at.pop();
      }
    };
    sweep(LambdaTree::root(), 0);
  } else {
    open = undecided;
  }
  std::sort(open.begin(), open.end());
  std::optional<Position> last;
  for (const auto& p : open) {
    if (last && last->is_prefix_of(p)) continue;
    if (!cur.find(p)) continue;
    cur = replace_at(cur, p, LambdaTree::leaf(TreeNode::unknown()));
    last = p;
  }

  Approximant a;
  a.tree = truncate_marked(sig, cur, depth);
  a.fuel_spent = steps;
  a.canonical = sig.canonical();
  return a;
}

}  // namespace ilc
