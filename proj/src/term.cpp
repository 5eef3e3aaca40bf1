#include "ilc/term.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace ilc {

Term Term::bot() {
  static const Term b(std::make_shared<const Node>(Node{Kind::Bot, {}, Term(nullptr), Term(nullptr)}));
  return b;
}

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), Term(nullptr), Term(nullptr)}));
}

Term Term::abs(std::string binder, Term body) {
  return Term(std::make_shared<const Node>(Node{Kind::Abs, std::move(binder), std::move(body), Term(nullptr)}));
}

Term Term::app(Term fun, Term arg) {
  return Term(std::make_shared<const Node>(Node{Kind::App, {}, std::move(fun), std::move(arg)}));
}

std::size_t Term::size() const {
  switch (kind()) {
    case Kind::Bot: return 0;
    case Kind::Var: return 1;
    case Kind::Abs: return 1 + body().size();
    case Kind::App: return 1 + fun().size() + arg().size();
  }
  return 0;
}

double Distance::value() const { return zero ? 0.0 : std::ldexp(1.0, -static_cast<int>(exponent)); }

std::string Distance::str() const {
  if (zero) return "0";
  if (exponent == 0) return "1";
  if (exponent < 63) return "1/" + std::to_string(1ull << exponent);
  return "2^-" + std::to_string(exponent);
}

// ---------------------------------------------------------------- parsing

bool is_identifier_char(char c, bool first) {
  bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (first) return alpha;
  return alpha || (c >= '0' && c <= '9') || c == '_';
}

bool is_keyword(const std::string& ident) { return ident == "bot" || ident == "rec"; }

namespace detail {
namespace {

constexpr std::string_view kLambda = "\xCE\xBB";  // λ
constexpr std::string_view kBottom = "\xE2\x8A\xA5";  // ⊥

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  std::unique_ptr<Syntax> parse() {
    auto t = term();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected input");
    return t;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r'))
      ++pos_;
  }

  bool starts_with(std::string_view s) const { return text_.compare(pos_, s.size(), s) == 0; }

  bool at_lambda() const { return pos_ < text_.size() && (text_[pos_] == '\\' || starts_with(kLambda)); }

  std::string peek_identifier() const {
    std::size_t p = pos_;
    if (p >= text_.size() || !is_identifier_char(text_[p], true)) return {};
    while (p < text_.size() && is_identifier_char(text_[p], false)) ++p;
    return text_.substr(pos_, p - pos_);
  }

  std::string identifier() {
    skip_space();
    std::string id = peek_identifier();
    if (id.empty()) fail("expected identifier");
    if (is_keyword(id)) fail("keyword '" + id + "' used as identifier");
    pos_ += id.size();
    return id;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::unique_ptr<Syntax> binder(Syntax::Kind kind, std::size_t at) {
    auto node = std::make_unique<Syntax>();
    node->kind = kind;
    node->offset = at;
    node->name = identifier();
    expect('.');
    node->left = term();
    return node;
  }

  std::unique_ptr<Syntax> term() {
    skip_space();
    std::size_t at = pos_;
    if (at_lambda()) {
      pos_ += text_[pos_] == '\\' ? 1 : kLambda.size();
      return binder(Syntax::Kind::Abs, at);
    }
    if (peek_identifier() == "rec") {
      pos_ += 3;
      return binder(Syntax::Kind::Rec, at);
    }
    return application();
  }

  std::unique_ptr<Syntax> application() {
    auto head = atom();
    if (!head) fail("expected term");
    for (;;) {
      skip_space();
      std::size_t at = pos_;
      std::unique_ptr<Syntax> arg;
      // a trailing binder extends maximally to the right
      if (at_lambda() || peek_identifier() == "rec") {
        arg = term();
      } else {
        arg = atom();
        if (!arg) break;
      }
      auto app = std::make_unique<Syntax>();
      app->kind = Syntax::Kind::App;
      app->offset = at;
      app->left = std::move(head);
      app->right = std::move(arg);
      head = std::move(app);
    }
    return head;
  }

  std::unique_ptr<Syntax> atom() {
    skip_space();
    std::size_t at = pos_;
    if (pos_ >= text_.size()) return nullptr;
    if (text_[pos_] == '(') {
      ++pos_;
      auto t = term();
      expect(')');
      return t;
    }
    if (starts_with(kBottom)) {
      pos_ += kBottom.size();
      auto b = std::make_unique<Syntax>();
      b->offset = at;
      return b;
    }
    std::string id = peek_identifier();
    if (id.empty() || id == "rec") return nullptr;
    pos_ += id.size();
    auto node = std::make_unique<Syntax>();
    node->offset = at;
    if (id != "bot") {
      node->kind = Syntax::Kind::Var;
      node->name = id;
    }
    return node;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Syntax> parse_syntax(const std::string& text) { return Parser(text).parse(); }

}  // namespace detail

namespace {

Term to_term(const detail::Syntax& s) {
  using K = detail::Syntax::Kind;
  switch (s.kind) {
    case K::Bot: return Term::bot();
    case K::Var: return Term::var(s.name);
    case K::Abs: return Term::abs(s.name, to_term(*s.left));
    case K::App: return Term::app(to_term(*s.left), to_term(*s.right));
    case K::Rec: throw ParseError("'rec' is only allowed in tree literals", s.offset);
  }
  return Term::bot();
}

}  // namespace

Term parse_term(const std::string& text) { return to_term(*detail::parse_syntax(text)); }

// ---------------------------------------------------------------- printing

namespace {

void render(const Term& t, Glyphs g, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Bot: out += g == Glyphs::Ascii ? "bot" : "\xE2\x8A\xA5"; return;
    case Term::Kind::Var: out += t.name(); return;
    case Term::Kind::Abs:
      out += g == Glyphs::Unicode ? "\xCE\xBB" : "\\";
      out += t.name();
      out += '.';
      render(t.body(), g, out);
      return;
    case Term::Kind::App: {
      const Term& f = t.fun();
      bool paren_f = f.kind() == Term::Kind::Abs;
      if (paren_f) out += '(';
      render(f, g, out);
      if (paren_f) out += ')';
      out += ' ';
      const Term& a = t.arg();
      bool paren_a = a.kind() == Term::Kind::Abs || a.kind() == Term::Kind::App;
      if (paren_a) out += '(';
      render(a, g, out);
      if (paren_a) out += ')';
      return;
    }
  }
}

}  // namespace

std::string render_term(const Term& t, Glyphs glyphs) {
  std::string out;
  render(t, glyphs, out);
  return out;
}

// ---------------------------------------------------------------- structure

namespace {

void collect_positions(const Term& t, Position& at, std::set<Position>& out) {
  if (t.is_bot()) return;
  out.insert(at);
  if (t.kind() == Term::Kind::Abs) {
    at.push(0);
    collect_positions(t.body(), at, out);
    at.pop();
  } else if (t.kind() == Term::Kind::App) {
    at.push(1);
    collect_positions(t.fun(), at, out);
    at.pop();
    at.push(2);
    collect_positions(t.arg(), at, out);
    at.pop();
  }
}

/// Scoped binder environment mapping names to fresh binder ids (gensym).
struct Scope {
  std::vector<std::pair<std::string, int>> frames;
  int lookup(const std::string& name) const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      if (it->first == name) return it->second;
    return -1;
  }
};

bool same_variable(const Term& m, const Scope& sm, const Term& n, const Scope& sn) {
  int bm = sm.lookup(m.name()), bn = sn.lookup(n.name());
  if (bm >= 0 || bn >= 0) return bm == bn;
  return m.name() == n.name();
}

void collect_conflicts(const Term& m, Scope& sm, const Term& n, Scope& sn, Position& at, int& fresh,
                       std::set<Position>& out) {
  using K = Term::Kind;
  if (m.kind() == K::Bot && n.kind() == K::Bot) return;
  if (m.kind() == K::Var && n.kind() == K::Var) {
    if (!same_variable(m, sm, n, sn)) out.insert(at);
    return;
  }
  if (m.kind() == K::App && n.kind() == K::App) {
    at.push(1);
    collect_conflicts(m.fun(), sm, n.fun(), sn, at, fresh, out);
    at.pop();
    at.push(2);
    collect_conflicts(m.arg(), sm, n.arg(), sn, at, fresh, out);
    at.pop();
    return;
  }
  if (m.kind() == K::Abs && n.kind() == K::Abs) {
    int z = fresh++;
    sm.frames.emplace_back(m.name(), z);
    sn.frames.emplace_back(n.name(), z);
    at.push(0);
    collect_conflicts(m.body(), sm, n.body(), sn, at, fresh, out);
    at.pop();
    sm.frames.pop_back();
    sn.frames.pop_back();
    return;
  }
  out.insert(at);
}

bool leq(const StrictnessSignature& sig, const Term& m, Scope& sm, const Term& n, Scope& sn, int& fresh) {
  using K = Term::Kind;
  if (m.kind() == K::Bot) return true;
  if (m.kind() != n.kind()) return false;
  auto strict_ok = [&](int edge, const Term& a, const Term& b) {
    return sig.a(edge) || !a.is_bot() || b.is_bot();
  };
  switch (m.kind()) {
    case K::Var: return same_variable(m, sm, n, sn);
    case K::Abs: {
      if (!strict_ok(0, m.body(), n.body())) return false;
      int z = fresh++;
      sm.frames.emplace_back(m.name(), z);
      sn.frames.emplace_back(n.name(), z);
      bool ok = leq(sig, m.body(), sm, n.body(), sn, fresh);
      sm.frames.pop_back();
      sn.frames.pop_back();
      return ok;
    }
    case K::App:
      return strict_ok(1, m.fun(), n.fun()) && strict_ok(2, m.arg(), n.arg()) &&
             leq(sig, m.fun(), sm, n.fun(), sn, fresh) && leq(sig, m.arg(), sm, n.arg(), sn, fresh);
    case K::Bot: return true;
  }
  return false;
}

void collect_free(const Term& t, Scope& scope, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Bot: return;
    case Term::Kind::Var:
      if (scope.lookup(t.name()) < 0) out.insert(t.name());
      return;
    case Term::Kind::Abs:
      scope.frames.emplace_back(t.name(), 0);
      collect_free(t.body(), scope, out);
      scope.frames.pop_back();
      return;
    case Term::Kind::App:
      collect_free(t.fun(), scope, out);
      collect_free(t.arg(), scope, out);
      return;
  }
}

}  // namespace

std::set<Position> term_positions(const Term& t) {
  std::set<Position> out;
  Position at;
  collect_positions(t, at, out);
  return out;
}

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  Scope scope;
  collect_free(t, scope, out);
  return out;
}

std::set<Position> conflicts(const Term& m, const Term& n) {
  std::set<Position> out;
  Scope sm, sn;
  Position at;
  int fresh = 0;
  collect_conflicts(m, sm, n, sn, at, fresh, out);
  return out;
}

bool alpha_equivalent(const Term& m, const Term& n) { return conflicts(m, n).empty(); }

Distance term_distance(const StrictnessSignature& sig, const Term& m, const Term& n) {
  auto cs = conflicts(m, n);
  if (cs.empty()) return {};
  std::size_t best = SIZE_MAX;
  for (const auto& p : cs) best = std::min(best, sig.depth(p));
  return Distance::of_depth(best);
}

bool term_leq(const StrictnessSignature& sig, const Term& m, const Term& n) {
  Scope sm, sn;
  int fresh = 0;
  return leq(sig, m, sm, n, sn, fresh);
}

std::size_t term_height(const StrictnessSignature& sig, const Term& m) {
  switch (m.kind()) {
    case Term::Kind::Bot: return 0;
    case Term::Kind::Var: return 1;
    case Term::Kind::Abs: return std::max<std::size_t>(1, term_height(sig, m.body()) + sig.weight(0));
    case Term::Kind::App:
      return std::max({std::size_t{1}, term_height(sig, m.fun()) + sig.weight(1),
                       term_height(sig, m.arg()) + sig.weight(2)});
  }
  return 0;
}

}  // namespace ilc
