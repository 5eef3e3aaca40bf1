#include "ilc/tree.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <unordered_map>

namespace ilc {

// ---------------------------------------------------------------- symbols

namespace {

struct SymbolTable {
  std::mutex mutex;
  std::vector<std::string> names;
  std::unordered_map<std::string, SymbolId> ids;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

struct PairHash {
  std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const noexcept {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

}  // namespace

SymbolId intern(const std::string& name) {
  auto& t = symbols();
  std::lock_guard lock(t.mutex);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return it->second;
  auto id = static_cast<SymbolId>(t.names.size());
  t.names.push_back(name);
  t.ids.emplace(name, id);
  return id;
}

const std::string& symbol_name(SymbolId id) {
  auto& t = symbols();
  std::lock_guard lock(t.mutex);
  return t.names.at(id);
}

// ---------------------------------------------------------------- canonical form

LambdaTree::LambdaTree() : nodes_{TreeNode::hole()} { hash_ = static_cast<std::size_t>(mix(mix(mix(mix(0, 0), 0), 0), 0)); }

LambdaTree LambdaTree::leaf(TreeNode node) { return from_graph({node}, 0); }

LambdaTree LambdaTree::from_graph(std::vector<TreeNode> nodes, std::uint32_t root) {
  // reachable nodes, normalized
  const std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> index(nodes.size(), none);
  std::vector<std::uint32_t> order;
  {
    std::vector<std::uint32_t> work{root};
    index[root] = 0;
    order.push_back(root);
    while (!work.empty()) {
      auto id = work.back();
      work.pop_back();
      const TreeNode& n = nodes[id];
      auto visit = [&](std::uint32_t c) {
        if (index[c] == none) {
          index[c] = static_cast<std::uint32_t>(order.size());
          order.push_back(c);
          work.push_back(c);
        }
      };
      if (n.kind == NodeKind::Lam) visit(n.left);
      if (n.kind == NodeKind::App) {
        visit(n.left);
        visit(n.right);
      }
    }
  }
  const std::size_t count = order.size();
  std::vector<TreeNode> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode n = nodes[order[i]];
    TreeNode m;
    m.kind = n.kind;
    switch (n.kind) {
      case NodeKind::Lam: m.left = index[n.left]; break;
      case NodeKind::App: m.left = index[n.left]; m.right = index[n.right]; break;
      case NodeKind::BVar:
      case NodeKind::FVar: m.value = n.value; break;
      default: break;
    }
    g[i] = m;
  }

  // cycle detection by iterative DFS colouring
  bool cyclic = false;
  std::vector<std::uint32_t> post;
  post.reserve(count);
  {
    std::vector<std::uint8_t> colour(count, 0);
    std::vector<std::pair<std::uint32_t, int>> stack{{0, 0}};
    colour[0] = 1;
    while (!stack.empty()) {
      auto& [id, edge] = stack.back();
      const TreeNode& n = g[id];
      int arity = n.kind == NodeKind::Lam ? 1 : n.kind == NodeKind::App ? 2 : 0;
      if (edge < arity) {
        std::uint32_t c = edge == 0 ? n.left : n.right;
        ++edge;
        if (colour[c] == 1) cyclic = true;
        else if (colour[c] == 0) {
          colour[c] = 1;
          stack.emplace_back(c, 0);
        }
      } else {
        colour[id] = 2;
        post.push_back(id);
        stack.pop_back();
      }
    }
  }

  // minimization: class per node
  std::vector<std::uint32_t> cls(count, 0);
  std::size_t classes = 0;
  if (!cyclic) {
    // hash-consing bottom-up
    std::map<std::tuple<int, std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> table;
    for (auto id : post) {
      const TreeNode& n = g[id];
      std::uint32_t l = n.kind == NodeKind::Lam || n.kind == NodeKind::App ? cls[n.left] : 0;
      std::uint32_t r = n.kind == NodeKind::App ? cls[n.right] : 0;
      auto [it, fresh] = table.try_emplace({static_cast<int>(n.kind), n.value, l, r},
                                           static_cast<std::uint32_t>(table.size()));
      cls[id] = it->second;
    }
    classes = table.size();
  } else {
    // Moore partition refinement
    {
      std::map<std::pair<int, std::uint32_t>, std::uint32_t> init;
      for (std::size_t i = 0; i < count; ++i) {
        auto [it, fresh] = init.try_emplace({static_cast<int>(g[i].kind), g[i].value},
                                            static_cast<std::uint32_t>(init.size()));
        cls[i] = it->second;
      }
      classes = init.size();
    }
    for (;;) {
      std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> table;
      std::vector<std::uint32_t> next(count);
      for (std::size_t i = 0; i < count; ++i) {
        const TreeNode& n = g[i];
        std::uint32_t l = n.kind == NodeKind::Lam || n.kind == NodeKind::App ? cls[n.left] + 1 : 0;
        std::uint32_t r = n.kind == NodeKind::App ? cls[n.right] + 1 : 0;
        auto [it, fresh] = table.try_emplace({cls[i], l, r}, static_cast<std::uint32_t>(table.size()));
        next[i] = it->second;
      }
      bool stable = table.size() == classes;
      cls = std::move(next);
      classes = table.size();
      if (stable) break;
    }
  }

  // quotient, numbered breadth-first from the root
  std::vector<std::uint32_t> rep(classes, none);
  for (std::size_t i = 0; i < count; ++i)
    if (rep[cls[i]] == none) rep[cls[i]] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> number(classes, none);
  std::vector<std::uint32_t> bfs{cls[0]};
  number[cls[0]] = 0;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    const TreeNode& n = g[rep[bfs[head]]];
    auto visit = [&](std::uint32_t c) {
      if (number[cls[c]] == none) {
        number[cls[c]] = static_cast<std::uint32_t>(bfs.size());
        bfs.push_back(cls[c]);
      }
    };
    if (n.kind == NodeKind::Lam) visit(n.left);
    if (n.kind == NodeKind::App) {
      visit(n.left);
      visit(n.right);
    }
  }
  LambdaTree t;
  t.nodes_.assign(bfs.size(), TreeNode{});
  t.finite_ = !cyclic;
  t.max_index_ = 0;
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    TreeNode n = g[rep[bfs[i]]];
    if (n.kind == NodeKind::Lam) n.left = number[cls[n.left]];
    if (n.kind == NodeKind::App) {
      n.left = number[cls[n.left]];
      n.right = number[cls[n.right]];
    }
    if (n.kind == NodeKind::BVar) t.max_index_ = std::max(t.max_index_, n.value);
    t.nodes_[i] = n;
    h = mix(h, static_cast<std::uint64_t>(n.kind));
    h = mix(h, n.left);
    h = mix(h, n.right);
    h = mix(h, n.value);
  }
  t.hash_ = static_cast<std::size_t>(h);
  return t;
}

bool LambdaTree::has_kind(NodeKind k) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [k](const TreeNode& n) { return n.kind == k; });
}

bool LambdaTree::is_closed() const {
  // states (node, binder depth); depths beyond the largest index behave alike
  const std::uint32_t cap = max_index_ + 1;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{0, 0}};
  while (!work.empty()) {
    auto [id, d] = work.back();
    work.pop_back();
    if (!seen.insert({id, d}).second) continue;
    const TreeNode& n = nodes_[id];
    if (n.kind == NodeKind::BVar && n.value >= d) return false;
    if (n.kind == NodeKind::Lam) work.emplace_back(n.left, std::min(d + 1, cap));
    if (n.kind == NodeKind::App) {
      work.emplace_back(n.left, d);
      work.emplace_back(n.right, d);
    }
  }
  return true;
}

std::optional<std::uint32_t> LambdaTree::find(const Position& p) const {
  std::uint32_t id = 0;
  for (auto d : p.digits()) {
    const TreeNode& n = nodes_[id];
    if (!n.has_child(d)) return std::nullopt;
    id = n.child(d);
  }
  return id;
}

bool LambdaTree::in_domain(const Position& p) const {
  auto id = find(p);
  return id && nodes_[*id].kind != NodeKind::Hole;
}

std::uint32_t GraphBuilder::import(const LambdaTree& t) {
  auto offset = static_cast<std::uint32_t>(nodes_.size());
  for (TreeNode n : t.nodes()) {
    if (n.kind == NodeKind::Lam) n.left += offset;
    if (n.kind == NodeKind::App) {
      n.left += offset;
      n.right += offset;
    }
    nodes_.push_back(n);
  }
  return offset;
}

std::uint32_t GraphBuilder::hole() {
  if (!hole_) hole_ = add(TreeNode::hole());
  return *hole_;
}

// ---------------------------------------------------------------- conversion

namespace {

std::uint32_t build_from_term(const Term& m, std::vector<std::string>& binders, GraphBuilder& b) {
  switch (m.kind()) {
    case Term::Kind::Bot: return b.hole();
    case Term::Kind::Var:
      for (std::size_t k = 0; k < binders.size(); ++k)
        if (binders[binders.size() - 1 - k] == m.name()) return b.add(TreeNode::bvar(static_cast<std::uint32_t>(k)));
      return b.add(TreeNode::fvar(intern(m.name())));
    case Term::Kind::Abs: {
      binders.push_back(m.name());
      auto body = build_from_term(m.body(), binders, b);
      binders.pop_back();
      return b.add(TreeNode::lam(body));
    }
    case Term::Kind::App: {
      auto f = build_from_term(m.fun(), binders, b);
      auto a = build_from_term(m.arg(), binders, b);
      return b.add(TreeNode::app(f, a));
    }
  }
  return b.hole();
}

/// Deterministic fresh names `<stem>0, <stem>1, ...` avoiding a set of names.
class NameSupply {
public:
  NameSupply(std::string stem, std::set<std::string> avoid) : stem_(std::move(stem)), avoid_(std::move(avoid)) {}
  std::string next() {
    for (;;) {
      std::string n = stem_ + std::to_string(counter_++);
      if (!avoid_.count(n)) return n;
    }
  }

private:
  std::string stem_;
  std::set<std::string> avoid_;
  unsigned counter_ = 0;
};

Term build_term(const LambdaTree& t, std::uint32_t id, std::vector<std::string>& binders, NameSupply& names) {
  const TreeNode& n = t.node(id);
  switch (n.kind) {
    case NodeKind::Hole: return Term::bot();
    case NodeKind::FVar: return Term::var(symbol_name(n.value));
    case NodeKind::BVar:
      if (n.value >= binders.size()) throw TreeError("tree has an unbound de Bruijn index");
      return Term::var(binders[binders.size() - 1 - n.value]);
    case NodeKind::Lam: {
      std::string x = names.next();
      binders.push_back(x);
      Term body = build_term(t, n.left, binders, names);
      binders.pop_back();
      return Term::abs(x, body);
    }
    case NodeKind::App: {
      Term f = build_term(t, n.left, binders, names);
      Term a = build_term(t, n.right, binders, names);
      return Term::app(f, a);
    }
    default: throw TreeError("tree contains Cut/Unknown leaves");
  }
}

}  // namespace

LambdaTree tree_of_term(const Term& m) {
  GraphBuilder b;
  std::vector<std::string> binders;
  auto root = build_from_term(m, binders, b);
  return std::move(b).build(root);
}

std::set<std::string> free_names(const LambdaTree& t) {
  std::set<std::string> out;
  for (const auto& n : t.nodes())
    if (n.kind == NodeKind::FVar) out.insert(symbol_name(n.value));
  return out;
}

Term term_of_tree(const LambdaTree& t) {
  if (!t.is_finite()) throw TreeError("term_of_tree: tree is infinite");
  if (t.has_partial_leaves()) throw TreeError("term_of_tree: tree contains Cut/Unknown leaves");
  NameSupply names("x", free_names(t));
  std::vector<std::string> binders;
  return build_term(t, 0, binders, names);
}

// ---------------------------------------------------------------- rec literals

namespace {

class RecBuilder {
public:
  std::uint32_t build(const detail::Syntax& s) {
    using K = detail::Syntax::Kind;
    switch (s.kind) {
      case K::Bot: return b_.hole();
      case K::Var: return variable(s);
      case K::Abs: {
        scope_.push_back({false, s.name, 0, lambda_depth_, 0});
        ++lambda_depth_;
        auto body = build(*s.left);
        --lambda_depth_;
        scope_.pop_back();
        return b_.add(TreeNode::lam(body));
      }
      case K::App: {
        auto f = build(*s.left);
        auto a = build(*s.right);
        return b_.add(TreeNode::app(f, a));
      }
      case K::Rec: {
        auto placeholder = b_.add(TreeNode::hole());
        std::size_t rec_index = recs_.size();
        recs_.push_back({s.name, s.offset, false, false});
        scope_.push_back({true, s.name, placeholder, lambda_depth_, rec_index});
        auto body = build(*s.left);
        scope_.pop_back();
        alias_[placeholder] = body;
        const auto& info = recs_[rec_index];
        if (info.outer_ref && info.shifted)
          throw ParseError("rec body refers to an outer binder across a cycle through a binder", s.offset);
        return placeholder;
      }
    }
    return b_.hole();
  }

  LambdaTree finish(std::uint32_t root) && {
    auto resolve = [&](std::uint32_t id, std::size_t offset) {
      std::size_t steps = 0;
      while (alias_.count(id)) {
        id = alias_[id];
        if (++steps > alias_.size()) throw ParseError("unguarded rec: the binder refers to itself", offset);
      }
      return id;
    };
    for (std::size_t i = 0; i < b_.size(); ++i) {
      TreeNode& n = b_[static_cast<std::uint32_t>(i)];
      if (n.kind == NodeKind::Lam) n.left = resolve(n.left, 0);
      if (n.kind == NodeKind::App) {
        n.left = resolve(n.left, 0);
        n.right = resolve(n.right, 0);
      }
    }
    root = resolve(root, 0);
    return std::move(b_).build(root);
  }

private:
  struct Entry {
    bool rec;
    std::string name;
    std::uint32_t placeholder;
    std::uint32_t depth;  // lambda depth at the binding site
    std::size_t rec_index;
  };
  struct RecInfo {
    std::string name;
    std::size_t offset;
    bool outer_ref;
    bool shifted;
  };

  std::uint32_t variable(const detail::Syntax& s) {
    for (std::size_t k = scope_.size(); k-- > 0;) {
      const Entry& e = scope_[k];
      if (e.name != s.name) continue;
      if (e.rec) {
        if (lambda_depth_ != e.depth) recs_[e.rec_index].shifted = true;
        return e.placeholder;
      }
      // lambda bound: every rec opened inside this binder sees an outer reference
      for (std::size_t j = k + 1; j < scope_.size(); ++j)
        if (scope_[j].rec) recs_[scope_[j].rec_index].outer_ref = true;
      return b_.add(TreeNode::bvar(lambda_depth_ - e.depth - 1));
    }
    return b_.add(TreeNode::fvar(intern(s.name)));
  }

  GraphBuilder b_;
  std::vector<Entry> scope_;
  std::vector<RecInfo> recs_;
  std::map<std::uint32_t, std::uint32_t> alias_;
  std::uint32_t lambda_depth_ = 0;
};

class Renderer {
public:
  Renderer(const LambdaTree& t, Glyphs g, unsigned unfold)
      : t_(t), g_(g), unfold_(unfold), lambdas_("x", free_names(t)), recs_("X", free_names(t)) {
    mark_cyclic();
  }

  std::string run() { return render(0).text; }

private:
  enum class Form { Atom, App, Binder };
  struct Out {
    std::string text;
    Form form;
  };
  struct Frame {
    std::uint32_t node;
    std::string name;
    bool used = false;
  };

  void mark_cyclic() {
    // nodes on a cycle: reachable from one of their own children
    const auto& nodes = t_.nodes();
    on_cycle_.assign(nodes.size(), false);
    if (t_.is_finite()) return;
    for (std::uint32_t s = 0; s < nodes.size(); ++s) {
      std::vector<bool> seen(nodes.size(), false);
      std::vector<std::uint32_t> work;
      auto push_children = [&](std::uint32_t id) {
        const TreeNode& n = nodes[id];
        if (n.kind == NodeKind::Lam) work.push_back(n.left);
        if (n.kind == NodeKind::App) {
          work.push_back(n.left);
          work.push_back(n.right);
        }
      };
      push_children(s);
      while (!work.empty() && !on_cycle_[s]) {
        auto id = work.back();
        work.pop_back();
        if (id == s) on_cycle_[s] = true;
        if (seen[id]) continue;
        seen[id] = true;
        push_children(id);
      }
    }
  }

  std::string glyph_bot() const { return g_ == Glyphs::Ascii ? "bot" : "\xE2\x8A\xA5"; }
  std::string glyph_lambda() const { return g_ == Glyphs::Unicode ? "\xCE\xBB" : "\\"; }

  Out render(std::uint32_t id) {
    if (on_cycle_[id]) {
      std::size_t active = 0, outermost = frames_.size();
      for (std::size_t k = 0; k < frames_.size(); ++k)
        if (frames_[k].node == id) {
          if (active == 0) outermost = k;
          ++active;
        }
      if (active > unfold_) {
        frames_[outermost].used = true;
        return {frames_[outermost].name, Form::Atom};
      }
      frames_.push_back({id, recs_.next()});
      Out inner = render_node(id);
      Frame f = frames_.back();
      frames_.pop_back();
      if (!f.used) return inner;
      return {"rec " + f.name + ". " + inner.text, Form::Binder};
    }
    return render_node(id);
  }

  Out render_node(std::uint32_t id) {
    const TreeNode& n = t_.node(id);
    switch (n.kind) {
      case NodeKind::Hole: return {glyph_bot(), Form::Atom};
      case NodeKind::Cut: return {g_ == Glyphs::Ascii ? "..." : "\xE2\x80\xA6", Form::Atom};
      case NodeKind::Unknown: return {"?", Form::Atom};
      case NodeKind::FVar: return {symbol_name(n.value), Form::Atom};
      case NodeKind::BVar:
        if (n.value < binders_.size()) return {binders_[binders_.size() - 1 - n.value], Form::Atom};
        return {"_" + std::to_string(n.value - binders_.size()), Form::Atom};
      case NodeKind::Lam: {
        std::string x = lambdas_.next();
        binders_.push_back(x);
        Out body = render(n.left);
        binders_.pop_back();
        return {glyph_lambda() + x + "." + body.text, Form::Binder};
      }
      case NodeKind::App: {
        Out f = render(n.left);
        Out a = render(n.right);
        std::string text = f.form == Form::Binder ? "(" + f.text + ")" : f.text;
        text += ' ';
        text += a.form == Form::Atom ? a.text : "(" + a.text + ")";
        return {text, Form::App};
      }
    }
    return {"?", Form::Atom};
  }

  const LambdaTree& t_;
  Glyphs g_;
  unsigned unfold_;
  NameSupply lambdas_, recs_;
  std::vector<bool> on_cycle_;
  std::vector<Frame> frames_;
  std::vector<std::string> binders_;
};

}  // namespace

LambdaTree parse_tree(const std::string& text) {
  auto syntax = detail::parse_syntax(text);
  RecBuilder builder;
  auto root = builder.build(*syntax);
  return std::move(builder).finish(root);
}

std::string render_tree(const LambdaTree& t, Glyphs glyphs, unsigned unfold) {
  return Renderer(t, glyphs, unfold).run();
}

// ---------------------------------------------------------------- structure

LambdaTree raw_subtree(const LambdaTree& t, const Position& p) {
  auto id = t.find(p);
  if (!id) throw TreeError("position " + p.str() + " is not in the domain");
  return LambdaTree::from_graph(t.nodes(), *id);
}

LambdaTree subtree_at(const LambdaTree& t, const Position& p) {
  auto id = t.find(p);
  if (!id || t.node(*id).kind == NodeKind::Hole) throw TreeError("position " + p.str() + " is not in the domain");
  GraphBuilder b(t);
  NameSupply names("v", free_names(t));
  std::map<std::uint32_t, std::uint32_t> fresh;  // escaped binder -> symbol
  const std::uint32_t cap = t.max_bvar_index() + 1;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> memo;
  std::function<std::uint32_t(std::uint32_t, std::uint32_t)> go = [&](std::uint32_t n, std::uint32_t d) {
    if (d >= cap) return n;
    auto key = std::make_pair(n, d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    TreeNode node = t.node(n);
    if (node.kind == NodeKind::BVar) {
      if (node.value < d) return memo[key] = n;
      auto escaped = node.value - d;
      if (!fresh.count(escaped)) fresh[escaped] = intern(names.next());
      return memo[key] = b.add(TreeNode::fvar(fresh[escaped]));
    }
    if (node.is_leaf()) return memo[key] = n;
    auto self = b.add(node);
    memo[key] = self;
    if (node.kind == NodeKind::Lam) {
      auto c = go(node.left, d + 1);
      b[self].left = c;
    } else {
      auto l = go(node.left, d);
      auto r = go(node.right, d);
      b[self].left = l;
      b[self].right = r;
    }
    return self;
  };
  auto root = go(*id, 0);
  return std::move(b).build(root);
}

LambdaTree replace_at(const LambdaTree& t, const Position& p, const LambdaTree& sub) {
  std::vector<std::uint32_t> path{0};
  for (auto d : p.digits()) {
    const TreeNode& n = t.node(path.back());
    if (!n.has_child(d)) throw TreeError("position " + p.str() + " is not in the graph");
    path.push_back(n.child(d));
  }
  GraphBuilder b(t);
  std::uint32_t current = b.import(sub);
  for (std::size_t k = p.size(); k-- > 0;) {
    TreeNode copy = t.node(path[k]);
    if (p[k] == 2) copy.right = current;
    else copy.left = current;
    current = b.add(copy);
  }
  return std::move(b).build(current);
}

LambdaTree remove_at(const LambdaTree& t, const Position& p) { return replace_at(t, p, LambdaTree()); }

std::optional<Position> binder_of(const LambdaTree& t, const Position& p) {
  std::vector<std::size_t> lambdas;
  std::uint32_t id = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const TreeNode& n = t.node(id);
    if (!n.has_child(p[k])) return std::nullopt;
    if (n.kind == NodeKind::Lam) lambdas.push_back(k);
    id = n.child(p[k]);
  }
  const TreeNode& n = t.node(id);
  if (n.kind != NodeKind::BVar || n.value >= lambdas.size()) return std::nullopt;
  return p.prefix(lambdas[lambdas.size() - 1 - n.value]);
}

namespace {

template <class Visit>
void walk_positions(const LambdaTree& t, std::size_t max_len, Visit&& visit) {
  Position at;
  std::function<void(std::uint32_t)> go = [&](std::uint32_t id) {
    const TreeNode& n = t.node(id);
    visit(at, n);
    if (at.size() >= max_len) return;
    if (n.kind == NodeKind::Lam) {
      at.push(0);
      go(n.left);
      at.pop();
    } else if (n.kind == NodeKind::App) {
      at.push(1);
      go(n.left);
      at.pop();
      at.push(2);
      go(n.right);
      at.pop();
    }
  };
  go(0);
}

}  // namespace

std::vector<Position> domain(const LambdaTree& t, std::size_t max_len) {
  std::vector<Position> out;
  walk_positions(t, max_len, [&](const Position& p, const TreeNode& n) {
    if (n.kind != NodeKind::Hole) out.push_back(p);
  });
  return out;
}

std::set<Position> bot_positions(const LambdaTree& t, std::size_t max_len) {
  std::set<Position> out;
  walk_positions(t, max_len, [&](const Position& p, const TreeNode& n) {
    if (n.kind == NodeKind::Hole) out.insert(p);
  });
  return out;
}

bool is_guarded(const StrictnessSignature& sig, const LambdaTree& t) {
  if (t.is_finite()) return true;
  const auto& nodes = t.nodes();
  std::vector<std::uint8_t> colour(nodes.size(), 0);
  std::function<bool(std::uint32_t)> has_cycle = [&](std::uint32_t id) {
    colour[id] = 1;
    const TreeNode& n = nodes[id];
    std::vector<std::uint32_t> next;
    if (n.kind == NodeKind::Lam && sig.strict(0)) next.push_back(n.left);
    if (n.kind == NodeKind::App) {
      if (sig.strict(1)) next.push_back(n.left);
      if (sig.strict(2)) next.push_back(n.right);
    }
    for (auto c : next) {
      if (colour[c] == 1) return true;
      if (colour[c] == 0 && has_cycle(c)) return true;
    }
    colour[id] = 2;
    return false;
  };
  for (std::uint32_t id = 0; id < nodes.size(); ++id)
    if (colour[id] == 0 && has_cycle(id)) return false;
  return true;
}

LambdaTree truncate(const StrictnessSignature& sig, const LambdaTree& t, std::size_t d) {
  if (!is_guarded(sig, t)) throw TreeError("truncate: tree is not guarded for signature " + sig.str());
  GraphBuilder b(t);
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> memo;
  std::function<std::uint32_t(std::uint32_t, std::size_t)> go = [&](std::uint32_t id, std::size_t depth) {
    if (depth >= d) return b.hole();
    const TreeNode node = t.node(id);
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

Distance tree_distance(const StrictnessSignature& sig, const LambdaTree& s, const LambdaTree& t) {
  if (s == t) return {};
  using State = std::pair<std::uint32_t, std::uint32_t>;
  std::unordered_map<State, std::size_t, PairHash> best;
  std::deque<std::pair<State, std::size_t>> queue{{{0, 0}, 0}};
  while (!queue.empty()) {
    auto [st, depth] = queue.front();
    queue.pop_front();
    auto it = best.find(st);
    if (it != best.end() && it->second <= depth) continue;
    best[st] = depth;
    const TreeNode& a = s.node(st.first);
    const TreeNode& b = t.node(st.second);
    if (!a.same_label(b)) return Distance::of_depth(depth);
    auto push = [&](int edge) {
      State next{a.child(edge), b.child(edge)};
      if (sig.weight(edge)) queue.push_back({next, depth + 1});
      else queue.push_front({next, depth});
    };
    if (a.kind == NodeKind::Lam) push(0);
    if (a.kind == NodeKind::App) {
      push(1);
      push(2);
    }
  }
  return {};  // bisimilar yet distinct graphs cannot occur in canonical form
}

LambdaTree erase_partial_leaves(const LambdaTree& t) {
  if (!t.has_partial_leaves()) return t;
  auto nodes = t.nodes();
  for (auto& n : nodes)
    if (n.kind == NodeKind::Cut || n.kind == NodeKind::Unknown) n = TreeNode::hole();
  return LambdaTree::from_graph(std::move(nodes), 0);
}

std::optional<Position> defined_region_mismatch(const LambdaTree& a, const LambdaTree& b) {
  using State = std::pair<std::uint32_t, std::uint32_t>;
  std::unordered_map<State, bool, PairHash> seen;
  std::deque<std::pair<State, Position>> queue{{{0, 0}, Position{}}};
  while (!queue.empty()) {
    auto [st, pos] = queue.front();
    queue.pop_front();
    if (seen.count(st)) continue;
    seen[st] = true;
    const TreeNode& x = a.node(st.first);
    const TreeNode& y = b.node(st.second);
    auto partial = [](const TreeNode& n) { return n.kind == NodeKind::Cut || n.kind == NodeKind::Unknown; };
    if (partial(x) || partial(y)) continue;
    if (!x.same_label(y)) return pos;
    if (x.kind == NodeKind::Lam) queue.push_back({{x.left, y.left}, pos.child(0)});
    if (x.kind == NodeKind::App) {
      queue.push_back({{x.left, y.left}, pos.child(1)});
      queue.push_back({{x.right, y.right}, pos.child(2)});
    }
  }
  return std::nullopt;
}

}  // namespace ilc
