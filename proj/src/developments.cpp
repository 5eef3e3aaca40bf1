#include "ilc/developments.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <unordered_map>

namespace ilc {

namespace {

constexpr std::size_t kOccurrenceCap = 4096;

std::uint32_t node_at(const LambdaTree& t, const Position& p) {
  auto id = t.find(p);
  if (!id) throw TreeError("position outside the tree: " + p.str());
  return *id;
}

// Positions (relative to `from`) of the variables bound by the binder just
// above `from`, bounded in length and count.
std::vector<Position> bound_occurrences(const LambdaTree& t, std::uint32_t from, std::size_t max_len) {
  std::vector<Position> out;
  Position cur;
  std::function<void(std::uint32_t, std::uint32_t)> walk = [&](std::uint32_t id, std::uint32_t d) {
    if (out.size() >= kOccurrenceCap) return;
    const TreeNode& n = t.node(id);
    switch (n.kind) {
      case NodeKind::BVar:
        if (n.value == d) out.push_back(cur);
        return;
      case NodeKind::Lam:
        if (cur.size() >= max_len) return;
        cur.push(0);
        walk(n.left, d + 1);
        cur.pop();
        return;
      case NodeKind::App:
        if (cur.size() >= max_len) return;
        cur.push(1);
        walk(n.left, d);
        cur.pop();
        cur.push(2);
        walk(n.right, d);
        cur.pop();
        return;
      default:
        return;
    }
  };
  walk(from, 0);
  return out;
}

// Walks w from `from` and reports the first prefix of w ending at a variable
// bound just above `from`.
std::optional<std::size_t> occurrence_prefix(const LambdaTree& t, std::uint32_t from, const Position& w) {
  std::uint32_t id = from;
  std::uint32_t d = 0;
  for (std::size_t i = 0;; ++i) {
    const TreeNode& n = t.node(id);
    if (n.kind == NodeKind::BVar && n.value == d) return i;
    if (i == w.size()) return std::nullopt;
    int e = w[i];
    if (!n.has_child(e)) throw TreeError("position outside the tree: " + w.str());
    if (n.kind == NodeKind::Lam) ++d;
    id = n.child(e);
  }
}

bool is_beta_redex(const LambdaTree& t, const Position& p) {
  auto id = t.find(p);
  if (!id) return false;
  const TreeNode& n = t.node(*id);
  return n.kind == NodeKind::App && t.node(n.left).kind == NodeKind::Lam;
}

std::vector<Position> outermost(const std::set<Position>& ps) {
  std::vector<Position> out;
  for (const auto& p : ps) {
    // Lexicographic order lists prefixes before their extensions.
    if (!out.empty() && out.back().is_prefix_of(p)) continue;
    out.push_back(p);
  }
  return out;
}

struct StateKey {
  LambdaTree tree;
  std::set<Position> marks;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::size_t h = k.tree.hash();
    PositionHash ph;
    for (const auto& p : k.marks) h = h * 1000003u ^ ph(p);
    return h;
  }
};

// Contracts the residuals parallel-outermost until none remain; no S-normalization.
Trace develop_raw(const StrictnessSignature& sig, const LambdaTree& t, std::set<Position> marks, std::size_t fuel) {
  RuleSystem rules = RuleSystem::beta_strict(sig);
  Trace trace;
  trace.sig = sig;
  trace.rules = rules.name();
  trace.strategy = "develop";
  trace.start = t;
  LambdaTree cur = t;
  std::unordered_map<StateKey, std::size_t, StateHash> seen;
  while (!marks.empty()) {
    StateKey key{cur, marks};
    if (auto it = seen.find(key); it != seen.end()) {
      trace.cycle_at = it->second;
      return trace;
    }
    seen.emplace(std::move(key), trace.steps.size());
    for (const auto& p : outermost(marks)) {
      if (!marks.count(p)) continue;
      std::optional<RuleTag> tag;
      if (is_beta_redex(cur, p)) tag = RuleTag::Beta;
      else if (redex_at(RuleSystem::strict(sig), cur, p)) tag = RuleTag::Strict;
      if (!tag) {
        marks.erase(p);
        continue;
      }
      if (trace.fuel_spent >= fuel) {
        trace.exhausted = true;
        return trace;
      }
      Step step = try_step(rules, cur, p, tag);
      ++trace.fuel_spent;
      marks = step_descendants(step, marks);
      cur = step.after;
      trace.steps.push_back(std::move(step));
    }
  }
  return trace;
}

// Appends leftmost-outermost S-steps until none remain.
void append_strict_steps(Trace& trace, std::size_t fuel) {
  RuleSystem s = RuleSystem::strict(trace.sig);
  while (trace.fuel_spent < fuel) {
    auto r = shallowest_redex(s, trace.final_tree());
    if (!r) return;
    trace.steps.push_back(try_step(s, trace.final_tree(), r->position, RuleTag::Strict));
    ++trace.fuel_spent;
  }
  if (shallowest_redex(s, trace.final_tree())) trace.exhausted = true;
}

}  // namespace

void validate_redex_set(const StrictnessSignature& sig, const RedexSet& rs) {
  if (!sig.residual_safe())
    throw std::invalid_argument("signature " + sig.str() + " does not keep residuals well defined");
  RuleSystem rules = RuleSystem::beta_strict(sig);
  for (const auto& p : rs.positions)
    if (!redex_at(rules, rs.tree, p)) throw std::invalid_argument("not a redex: " + p.str());
}

std::set<Position> step_descendants(const Step& step, const std::set<Position>& u, std::size_t max_len) {
  const Position& p0 = step.position;
  std::set<Position> out;
  if (step.rule == RuleTag::Strict || step.rule == RuleTag::Bot) {
    for (const auto& q : u)
      if (!p0.is_prefix_of(q)) out.insert(q);
    return out;
  }
  if (step.rule == RuleTag::Eta) {
    Position fun = p0.child(0).child(1);
    for (const auto& q : u) {
      if (!p0.is_prefix_of(q)) out.insert(q);
      else if (fun.is_prefix_of(q)) out.insert(p0.concat(q.drop(fun.size())));
    }
    return out;
  }
  Position body = p0.child(1).child(0);
  Position arg = p0.child(2);
  std::uint32_t body_id = node_at(step.before, body);
  std::optional<std::vector<Position>> occ;
  for (const auto& q : u) {
    if (!p0.is_prefix_of(q)) {
      out.insert(q);
    } else if (body.is_prefix_of(q)) {
      Position w = q.drop(body.size());
      auto hit = occurrence_prefix(step.before, body_id, w);
      if (!hit) out.insert(p0.concat(w));
    } else if (arg.is_prefix_of(q)) {
      Position w = q.drop(arg.size());
      if (p0.size() + w.size() > max_len) continue;
      if (!occ) occ = bound_occurrences(step.before, body_id, max_len - p0.size());
      for (const auto& v : *occ)
        if (p0.size() + v.size() + w.size() <= max_len) out.insert(p0.concat(v).concat(w));
    }
  }
  return out;
}

std::set<Position> descendants(const Trace& trace, const std::set<Position>& u, std::size_t max_len) {
  std::set<Position> d = u;
  std::size_t prefix_end = trace.cycle_at ? *trace.cycle_at : trace.steps.size();
  for (std::size_t i = 0; i < prefix_end; ++i) d = step_descendants(trace.steps[i], d, max_len);
  if (!trace.cycle_at) return d;

  // Iterate the cycle until the marks at its start repeat; survivors must be
  // present throughout a pass and never lie at or below a cut position.
  constexpr std::size_t kMaxPasses = 64;
  std::set<Position> survivors;
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    std::set<Position> start = d;
    survivors = d;
    for (std::size_t i = prefix_end; i < trace.steps.size(); ++i) {
      d = step_descendants(trace.steps[i], d, max_len);
      std::set<Position> keep;
      std::set_intersection(survivors.begin(), survivors.end(), d.begin(), d.end(),
                            std::inserter(keep, keep.end()));
      survivors = std::move(keep);
    }
    if (d == start) break;
  }
  std::vector<Position> cuts;
  for (std::size_t i = prefix_end; i < trace.steps.size(); ++i)
    cuts.push_back(trace.sig.acut(trace.steps[i].position));
  LambdaTree limit = p_limit(trace, max_len).tree;
  std::set<Position> out;
  for (const auto& p : survivors) {
    bool hit = std::any_of(cuts.begin(), cuts.end(), [&](const Position& c) { return c.is_prefix_of(p); });
    if (!hit && limit.in_domain(p)) out.insert(p);
  }
  return out;
}

Position ancestor(const Trace& trace, const Position& p) {
  if (trace.is_lasso()) throw std::invalid_argument("ancestor needs a finite trace");
  if (!trace.final_tree().in_domain(p)) throw TreeError("position outside the final tree: " + p.str());
  Position q = p;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    const Position& p0 = it->position;
    if (!p0.is_prefix_of(q)) continue;
    Position w = q.drop(p0.size());
    switch (it->rule) {
      case RuleTag::Strict:
      case RuleTag::Bot:
        throw TreeError("position inside a collapsed subtree: " + q.str());
      case RuleTag::Eta:
        q = p0.child(0).child(1).concat(w);
        break;
      case RuleTag::Beta: {
        Position body = p0.child(1).child(0);
        auto hit = occurrence_prefix(it->before, node_at(it->before, body), w);
        q = hit ? p0.child(2).concat(w.drop(*hit)) : body.concat(w);
        break;
      }
    }
  }
  return q;
}

Development develop(const StrictnessSignature& sig, const RedexSet& rs, std::size_t fuel) {
  validate_redex_set(sig, rs);
  Development dev;
  dev.trace = develop_raw(sig, rs.tree, rs.positions, fuel);
  if (dev.trace.is_lasso()) {
    dev.result = strict_nf(sig, p_limit(dev.trace, 64).tree);
  } else {
    if (!dev.trace.exhausted) append_strict_steps(dev.trace, fuel);
    dev.result = strict_nf(sig, dev.trace.final_tree());
  }
  return dev;
}

LambdaTree path_labels(const StrictnessSignature& sig, const RedexSet& rs) {
  validate_redex_set(sig, rs);
  const LambdaTree& t = rs.tree;
  if (!t.is_finite()) throw TreeError("path labelling needs a finite tree");
  for (const auto& p : rs.positions)
    if (!is_beta_redex(t, p)) throw std::invalid_argument("path labelling supports β-redexes only: " + p.str());

  GraphBuilder b;
  // Path positions in t increase lexicographically, so on a finite tree every
  // path is finite.
  std::function<std::uint32_t(const Position&, std::uint32_t, std::map<Position, std::uint32_t>&)> go =
      [&](const Position& p, std::uint32_t rd, std::map<Position, std::uint32_t>& env) -> std::uint32_t {
    if (rs.positions.count(p)) return go(p.child(1).child(0), rd, env);
    const TreeNode& n = t.node(node_at(t, p));
    switch (n.kind) {
      case NodeKind::Lam: {
        env[p] = rd;
        std::uint32_t body = go(p.child(0), rd + 1, env);
        env.erase(p);
        return b.add(TreeNode::lam(body));
      }
      case NodeKind::App: {
        std::uint32_t f = go(p.child(1), rd, env);
        std::uint32_t a = go(p.child(2), rd, env);
        return b.add(TreeNode::app(f, a));
      }
      case NodeKind::BVar: {
        auto binder = binder_of(t, p);
        if (!binder) throw TreeError("dangling bound variable at " + p.str());
        if (!binder->empty() && binder->back() == 1 && rs.positions.count(binder->parent())) {
          // Jump to the argument; the binders seen on the way stay in scope
          // only for variables of the argument itself.
          std::map<Position, std::uint32_t> inner;
          for (const auto& [pos, depth] : env)
            if (pos.is_proper_prefix_of(binder->parent())) inner.emplace(pos, depth);
          return go(binder->parent().child(2), rd, inner);
        }
        auto it = env.find(*binder);
        if (it == env.end()) throw std::logic_error("binder missing on path at " + p.str());
        return b.add(TreeNode::bvar(rd - it->second - 1));
      }
      default:
        return b.add(n);
    }
  };
  std::map<Position, std::uint32_t> env;
  std::uint32_t root = go(Position{}, 0, env);
  return strict_nf(sig, std::move(b).build(root));
}

StripJoin strip_join(const StrictnessSignature& sig, const Trace& long_trace, const Step& single, std::size_t fuel) {
  if (!sig.canonical())
    throw std::invalid_argument("strip joins need a signature with unique normal forms (001, 101, 111), got " +
                                sig.str());
  if (!(single.before == long_trace.start)) throw std::invalid_argument("the single step must start at the trace start");
  if (long_trace.exhausted) throw std::invalid_argument("the long trace was cut short by fuel");

  StripJoin out;
  Trace& bottom = out.from_single;
  bottom.sig = sig;
  bottom.rules = RuleSystem::beta_strict(sig).name();
  bottom.strategy = "strip";
  bottom.start = single.after;
  append_strict_steps(bottom, fuel);

  std::set<Position> marks{single.position};
  LambdaTree s = strict_nf(sig, single.after);
  std::size_t prefix_end = long_trace.cycle_at ? *long_trace.cycle_at : long_trace.steps.size();
  std::size_t cycle_len = long_trace.steps.size() - prefix_end;
  std::size_t total = long_trace.is_lasso() ? prefix_end + 64 * cycle_len : prefix_end;
  std::unordered_map<StateKey, std::size_t, StateHash> seen;
  bool closed = false;

  for (std::size_t i = 0; i < total; ++i) {
    std::size_t k = i < prefix_end ? i : prefix_end + (i - prefix_end) % cycle_len;
    const Step& st = long_trace.steps[k];
    if (k == prefix_end && long_trace.is_lasso()) {
      StateKey key{st.before, marks};
      if (auto it = seen.find(key); it != seen.end()) {
        if (it->second < bottom.steps.size()) bottom.cycle_at = it->second;
        closed = true;
        break;
      }
      seen.emplace(std::move(key), bottom.steps.size());
    }
    Development dev = develop(sig, {st.before, marks}, fuel);
    if (!dev.trace.is_closed()) throw StripError("development of the residuals did not terminate", i);
    std::set<Position> projected = descendants(dev.trace, {st.position});
    std::set<Position> next_marks = step_descendants(st, marks);
    Development next = develop(sig, {st.after, next_marks}, fuel);
    if (!(dev.result == s)) throw StripError("tile start does not match the bottom row", i);
    Development tile = develop(sig, {s, projected}, fuel);
    if (!tile.trace.is_closed() || !(tile.result == next.result))
      throw StripError("tile " + std::to_string(i) + " does not close", i);
    for (auto& step : tile.trace.steps) bottom.steps.push_back(std::move(step));
    bottom.fuel_spent += tile.trace.fuel_spent;
    s = next.result;
    marks = std::move(next_marks);
  }
  if (long_trace.is_lasso() && !closed)
    throw StripError("the residual marks along the cycle did not repeat", total);

  LambdaTree bottom_limit = bottom.is_lasso() ? strict_nf(sig, p_limit(bottom, 64).tree) : s;
  LambdaTree end = long_trace.is_lasso() ? p_limit(long_trace, 64).tree : long_trace.final_tree();
  std::set<Position> end_marks = descendants(long_trace, {single.position});
  Development closing = develop(sig, {end, end_marks}, fuel);
  out.from_long = closing.trace;
  if (!(closing.result == bottom_limit))
    throw StripError("limits of the strip do not meet", long_trace.steps.size());
  out.common = closing.result;
  return out;
}

std::string join_kind_name(JoinKind k) {
  switch (k) {
    case JoinKind::Joined: return "joined";
    case JoinKind::Failed: return "failed";
    case JoinKind::Unknown: return "unknown";
  }
  return "unknown";
}

JoinVerdict joinability(const StrictnessSignature& sig, const Trace& left, const Trace& right, std::size_t fuel,
                        std::size_t depth) {
  if (!(left.start == right.start)) throw std::invalid_argument("peak traces must share their start");
  auto normalize = [&](const Trace& tr) {
    bool collapse = tr.rules == RuleSystem::beta_strict(sig).name() || tr.rules == RuleSystem::strict(sig).name();
    Approximant end = p_limit(tr, depth);
    Approximant nf = bohm_tree(sig, end.tree, depth, fuel, RegionOrder::LeftFirst, collapse);
    nf.fuel_spent += end.fuel_spent;
    return nf;
  };
  JoinVerdict v;
  v.left = normalize(left);
  v.right = normalize(right);
  v.mismatch = defined_region_mismatch(v.left.tree, v.right.tree);
  if (v.mismatch) v.kind = JoinKind::Failed;
  else if (v.left.tree.has_unknown() || v.right.tree.has_unknown()) v.kind = JoinKind::Unknown;
  else v.kind = JoinKind::Joined;
  return v;
}

}  // namespace ilc
