#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilc/position.hpp"
#include "ilc/signature.hpp"
#include "ilc/term.hpp"

namespace ilc {

/// Raised when an operation is applied outside its domain (bad position,
/// cyclic tree where a finite one is needed, Cut/Unknown leaves, ...).
class TreeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using SymbolId = std::uint32_t;
SymbolId intern(const std::string& name);
const std::string& symbol_name(SymbolId id);

/// Cut and Unknown are analysis-only leaves: depth bound reached / fuel exhausted.
enum class NodeKind : std::uint8_t { Hole, Lam, App, BVar, FVar, Cut, Unknown };

struct TreeNode {
  NodeKind kind = NodeKind::Hole;
  std::uint32_t left = 0;   // Lam body, App function
  std::uint32_t right = 0;  // App argument
  std::uint32_t value = 0;  // BVar de Bruijn index, FVar symbol

  static TreeNode hole() { return {}; }
  static TreeNode lam(std::uint32_t body) { return {NodeKind::Lam, body, 0, 0}; }
  static TreeNode app(std::uint32_t f, std::uint32_t a) { return {NodeKind::App, f, a, 0}; }
  static TreeNode bvar(std::uint32_t index) { return {NodeKind::BVar, 0, 0, index}; }
  static TreeNode fvar(SymbolId s) { return {NodeKind::FVar, 0, 0, s}; }
  static TreeNode cut() { return {NodeKind::Cut, 0, 0, 0}; }
  static TreeNode unknown() { return {NodeKind::Unknown, 0, 0, 0}; }

  bool is_leaf() const { return kind != NodeKind::Lam && kind != NodeKind::App; }
  /// Same label, ignoring children.
  bool same_label(const TreeNode& o) const { return kind == o.kind && value == o.value; }
  /// Child along edge 0, 1 or 2 (caller checks the kind).
  std::uint32_t child(int edge) const { return edge == 2 ? right : left; }
  bool has_child(int edge) const {
    return edge == 0 ? kind == NodeKind::Lam : kind == NodeKind::App && (edge == 1 || edge == 2);
  }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// A regular lambda tree stored as a finite rooted graph, possibly cyclic.
/// Bound variables are de Bruijn indices. The graph is kept in a canonical
/// form (minimal, breadth-first numbered from the root at index 0), so tree
/// equality is graph equality.
class LambdaTree {
public:
  /// The empty tree ⊥.
  LambdaTree();

  /// Canonicalizes an arbitrary graph rooted at `root`.
  static LambdaTree from_graph(std::vector<TreeNode> nodes, std::uint32_t root);
  static LambdaTree leaf(TreeNode node);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::uint32_t id) const { return nodes_[id]; }
  const TreeNode& root_node() const { return nodes_[0]; }
  static constexpr std::uint32_t root() { return 0; }
  std::size_t size() const { return nodes_.size(); }

  bool is_bot() const { return root_node().kind == NodeKind::Hole; }
  bool is_finite() const { return finite_; }
  bool has_hole() const { return has_kind(NodeKind::Hole); }
  bool is_total() const { return !has_hole(); }
  bool has_cut() const { return has_kind(NodeKind::Cut); }
  bool has_unknown() const { return has_kind(NodeKind::Unknown); }
  bool has_partial_leaves() const { return has_cut() || has_unknown(); }
  bool has_kind(NodeKind k) const;
  std::uint32_t max_bvar_index() const { return max_index_; }
  /// True when every bound variable has an enclosing binder on every path.
  bool is_closed() const;

  /// Node at p, walking the graph; nullopt when p leaves the graph. The
  /// returned node may be a Hole (p ∈ dom⊥ then, not in dom).
  std::optional<std::uint32_t> find(const Position& p) const;
  bool in_domain(const Position& p) const;

  std::size_t hash() const { return hash_; }

  friend bool operator==(const LambdaTree& a, const LambdaTree& b) {
    return a.hash_ == b.hash_ && a.nodes_ == b.nodes_;
  }

private:
  std::vector<TreeNode> nodes_;
  bool finite_ = true;
  std::uint32_t max_index_ = 0;
  std::size_t hash_ = 0;
};

struct LambdaTreeHash {
  std::size_t operator()(const LambdaTree& t) const noexcept { return t.hash(); }
};

/// Mutable graph under construction; ids of imported trees are offsets.
class GraphBuilder {
public:
  GraphBuilder() = default;
  explicit GraphBuilder(const LambdaTree& base) : nodes_(base.nodes()) {}

  std::uint32_t add(TreeNode n) {
    nodes_.push_back(n);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  /// Copies t into the graph and returns the id of its root.
  std::uint32_t import(const LambdaTree& t);
  TreeNode& operator[](std::uint32_t id) { return nodes_[id]; }
  const TreeNode& operator[](std::uint32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::uint32_t hole();

  LambdaTree build(std::uint32_t root) && { return LambdaTree::from_graph(std::move(nodes_), root); }

private:
  std::vector<TreeNode> nodes_;
  std::optional<std::uint32_t> hole_;
};

/// Tree with leaves distinguishing ⊥ (Hole), depth cut-off (Cut) and
/// exhausted fuel (Unknown).
struct Approximant {
  LambdaTree tree;
  std::size_t fuel_spent = 0;
  /// False for signatures without unique normal forms.
  bool canonical = true;

  bool exact() const { return !tree.has_partial_leaves(); }
};

// ------------------------------------------------------------------ conversion

LambdaTree tree_of_term(const Term& m);
/// Inverse of tree_of_term; binder names come from a deterministic x0, x1, ...
/// supply that avoids the tree's free names. Rejects cyclic trees.
Term term_of_tree(const LambdaTree& t);

/// Parses a term or a regular-tree literal with `rec X. TERM` binders.
LambdaTree parse_tree(const std::string& text);
/// Renders in the rec-literal syntax. With unfold > 0 each cycle is expanded
/// that many extra times before referring back to its rec name. Cut prints
/// as "…" ("..." in ASCII), Unknown as "?".
std::string render_tree(const LambdaTree& t, Glyphs glyphs = Glyphs::Mixed, unsigned unfold = 0);

// ------------------------------------------------------------------ structure

/// Subtree at p; variables bound above p become fresh free variables.
LambdaTree subtree_at(const LambdaTree& t, const Position& p);
/// Subtree at p keeping de Bruijn indices (dangling ones refer above p).
LambdaTree raw_subtree(const LambdaTree& t, const Position& p);
/// t with the subtree at p replaced by `sub` (placed in the same binder context).
LambdaTree replace_at(const LambdaTree& t, const Position& p, const LambdaTree& sub);
/// t with the subtree at p removed.
LambdaTree remove_at(const LambdaTree& t, const Position& p);
/// Binder position of the bound variable at p.
std::optional<Position> binder_of(const LambdaTree& t, const Position& p);

/// Positions of dom(t) with length at most max_len, in lexicographic order.
std::vector<Position> domain(const LambdaTree& t, std::size_t max_len = 64);
/// ⊥-positions with length at most max_len.
std::set<Position> bot_positions(const LambdaTree& t, std::size_t max_len);
std::set<std::string> free_names(const LambdaTree& t);

/// Every infinite branch crosses infinitely many non-strict edges.
bool is_guarded(const StrictnessSignature& sig, const LambdaTree& t);
/// Restriction to positions of ā-depth < d.
LambdaTree truncate(const StrictnessSignature& sig, const LambdaTree& t, std::size_t d);
Distance tree_distance(const StrictnessSignature& sig, const LambdaTree& s, const LambdaTree& t);

/// Replaces every Cut and Unknown leaf with a Hole.
LambdaTree erase_partial_leaves(const LambdaTree& t);
/// First position (shortest, then lexicographic) where both trees carry
/// defined, different labels; positions where either side is Cut/Unknown
/// are skipped together with everything below them.
std::optional<Position> defined_region_mismatch(const LambdaTree& a, const LambdaTree& b);

}  // namespace ilc
