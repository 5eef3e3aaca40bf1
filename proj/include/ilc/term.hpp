#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilc/position.hpp"
#include "ilc/signature.hpp"

namespace ilc {

/// Raised on malformed input; carries the byte offset of the failure.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// Output alphabet. Mixed prints `\` for binders and `⊥` for holes.
enum class Glyphs { Mixed, Ascii, Unicode };

/// Finite lambda term with ⊥ and named variables. Immutable; copies share structure.
class Term {
public:
  enum class Kind { Bot, Var, Abs, App };

  static Term bot();
  static Term var(std::string name);
  static Term abs(std::string binder, Term body);
  static Term app(Term fun, Term arg);

  Kind kind() const;
  bool is_bot() const { return kind() == Kind::Bot; }
  /// Variable name or binder name.
  const std::string& name() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  std::size_t size() const;

private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind = Kind::Bot;
  std::string name;
  Term left{nullptr};
  Term right{nullptr};
};

inline Term::Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::body() const { return node_->left; }
inline const Term& Term::fun() const { return node_->left; }
inline const Term& Term::arg() const { return node_->right; }

/// Dyadic distance value: zero, or 2^-exponent.
struct Distance {
  bool zero = true;
  unsigned exponent = 0;

  static Distance of_depth(std::size_t d) { return {false, static_cast<unsigned>(d)}; }
  double value() const;
  /// "0", "1", "1/2", "1/4", ...
  std::string str() const;

  friend bool operator==(const Distance&, const Distance&) = default;
  friend bool operator<(const Distance& a, const Distance& b) { return a.value() < b.value(); }
  friend bool operator<=(const Distance& a, const Distance& b) { return a.value() <= b.value(); }
};

Term parse_term(const std::string& text);
std::string render_term(const Term& t, Glyphs glyphs = Glyphs::Mixed);

bool is_identifier_char(char c, bool first);
bool is_keyword(const std::string& ident);

/// Positions of t, excluding those of ⊥.
std::set<Position> term_positions(const Term& t);
std::set<std::string> free_variables(const Term& t);

/// All conflicts between m and n; empty iff m and n are α-equivalent.
/// Free variables are compared by name.
std::set<Position> conflicts(const Term& m, const Term& n);
bool alpha_equivalent(const Term& m, const Term& n);

Distance term_distance(const StrictnessSignature& sig, const Term& m, const Term& n);
bool term_leq(const StrictnessSignature& sig, const Term& m, const Term& n);
std::size_t term_height(const StrictnessSignature& sig, const Term& m);

namespace detail {

/// Surface syntax including `rec X.` tree binders, shared by the term and tree parsers.
struct Syntax {
  enum class Kind { Bot, Var, Abs, App, Rec };
  Kind kind = Kind::Bot;
  std::string name;
  std::size_t offset = 0;
  std::unique_ptr<Syntax> left, right;
};

std::unique_ptr<Syntax> parse_syntax(const std::string& text);

}  // namespace detail

}  // namespace ilc
