#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ilc/tree.hpp"

namespace ilc {

enum class RuleTag { Beta, Eta, Strict, Bot };
std::string rule_name(RuleTag tag);  // "beta", "eta", "S", "bot"
RuleTag parse_rule_tag(const std::string& name);

/// Decides whether a subtree is a ⊥-instance of a meaningless tree.
/// Implementations must be thread-safe.
class BotOracle {
public:
  virtual ~BotOracle() = default;
  virtual bool is_bot_instance(const LambdaTree& subtree) const = 0;
};

class RuleSystem {
public:
  enum class Kind { Beta, Eta, Strict, BetaStrict, BohmBot };

  static RuleSystem beta(StrictnessSignature sig = {}) { return {Kind::Beta, sig, nullptr}; }
  static RuleSystem eta(StrictnessSignature sig = {}) { return {Kind::Eta, sig, nullptr}; }
  static RuleSystem strict(StrictnessSignature sig) { return {Kind::Strict, sig, nullptr}; }
  static RuleSystem beta_strict(StrictnessSignature sig) { return {Kind::BetaStrict, sig, nullptr}; }
  /// β together with the ⊥-rule t → ⊥ for ⊥-instances decided by `oracle`.
  static RuleSystem bohm_bot(StrictnessSignature sig, std::shared_ptr<const BotOracle> oracle) {
    return {Kind::BohmBot, sig, std::move(oracle)};
  }

  Kind kind() const { return kind_; }
  const StrictnessSignature& sig() const { return sig_; }
  bool has_beta() const { return kind_ != Kind::Eta && kind_ != Kind::Strict; }
  bool has_eta() const { return kind_ == Kind::Eta; }
  bool has_strict() const { return kind_ == Kind::Strict || kind_ == Kind::BetaStrict; }
  bool has_bot() const { return kind_ == Kind::BohmBot; }
  const BotOracle* oracle() const { return oracle_.get(); }
  /// "beta", "eta", "strict", "betas", "bohm"
  std::string name() const;

private:
  RuleSystem(Kind k, StrictnessSignature s, std::shared_ptr<const BotOracle> o)
      : kind_(k), sig_(s), oracle_(std::move(o)) {}
  Kind kind_;
  StrictnessSignature sig_;
  std::shared_ptr<const BotOracle> oracle_;
};

struct Redex {
  Position position;
  RuleTag rule;
  friend bool operator==(const Redex&, const Redex&) = default;
};

struct Step {
  LambdaTree before;
  Position position;
  RuleTag rule;
  LambdaTree after;
  LambdaTree context;
  std::size_t depth = 0;
};

enum class Strategy { LeftmostOutermost, ParallelOutermost, DepthZeroFirst };
std::string strategy_name(Strategy s);  // "lmo", "po", "d0"
Strategy parse_strategy(const std::string& name);

/// A reduction of length at most ω: a finite list of steps, optionally closed
/// into a lasso by a repeated state.
struct Trace {
  StrictnessSignature sig;
  std::string rules;
  std::string strategy;
  LambdaTree start;
  std::vector<Step> steps;
  /// Cycle(k): steps[k].before equals the final state.
  std::optional<std::size_t> cycle_at;
  /// Stopped because fuel ran out (neither normal form nor lasso).
  bool exhausted = false;
  std::size_t fuel_spent = 0;

  const LambdaTree& final_tree() const { return steps.empty() ? start : steps.back().after; }
  bool is_lasso() const { return cycle_at.has_value(); }
  /// Finite reduction to a final tree (not a lasso, not cut short by fuel).
  bool is_closed() const { return !cycle_at && !exhausted; }
};

class StepError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// body[0 := arg] with indices above 0 lowered by one and arg shifted under
/// the binders it is copied below.
LambdaTree substitute(const LambdaTree& body, const LambdaTree& arg);

/// Highest-priority rule with a redex at p (⊥-rule, then S, β, η).
std::optional<RuleTag> redex_at(const RuleSystem& rules, const LambdaTree& t, const Position& p);
/// Redex occurrences with position length <= max_len, lexicographically
/// ordered, at most `limit` entries.
std::vector<Redex> redexes(const RuleSystem& rules, const LambdaTree& t, std::size_t max_len = 64,
                           std::size_t limit = 4096);

/// Redex of least ā-depth, leftmost among those.
std::optional<Redex> shallowest_redex(const RuleSystem& rules, const LambdaTree& t, std::size_t max_len = 64);

/// Contracts the redex at p by the given rule without building a Step.
LambdaTree contract(const LambdaTree& t, const Position& p, RuleTag tag);

Position acut(const StrictnessSignature& sig, const Position& p);
/// t with the subtree at acut(p) removed.
LambdaTree reduction_context(const StrictnessSignature& sig, const LambdaTree& t, const Position& p);

/// Contracts the redex at p; `tag` selects the rule when several apply.
Step try_step(const RuleSystem& rules, const LambdaTree& t, const Position& p, std::optional<RuleTag> tag = {});

Trace run_strategy(const RuleSystem& rules, Strategy strategy, const LambdaTree& t, std::size_t fuel,
                   std::size_t max_len = 64);

/// Trace that replays the given positions; with `repeat_from` the positions
/// from that index on are repeated until the state cycles (or fuel runs out).
Trace replay(const RuleSystem& rules, const LambdaTree& t, const std::vector<Position>& positions,
             std::optional<std::size_t> repeat_from = {}, std::size_t fuel = 10000);

}  // namespace ilc
