#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ilc/convergence.hpp"
#include "ilc/rewriting.hpp"

namespace ilc {

/// Three-valued answer with replayable evidence.
struct TriVerdict {
  Tri value = Tri::Unknown;
  LambdaTree start;
  /// β-steps performed by the analysis, in order.
  std::vector<Position> steps;
  /// Final tree after `steps`. For a No from is_active this is a stable reduct.
  LambdaTree reduct;

  /// Destructive loop evidence (is_active Yes): the steps from loop_start on
  /// repeat forever. Each repetition happens loop_shift function-side edges
  /// deeper below loop_anchor·1^loop_height; loop_shift 0 is an exact cycle.
  std::optional<std::size_t> loop_start;
  Position loop_anchor;
  std::size_t loop_height = 0;
  std::size_t loop_shift = 0;

  std::size_t fuel_spent = 0;
};

/// Replays a verdict's steps, unrolling a destructive loop `repetitions`
/// times. Exact cycles come back as lassos.
Trace witness_trace(const StrictnessSignature& sig, const TriVerdict& v, std::size_t repetitions = 4);

/// Yes when no reduct has a β-redex at depth 0.
TriVerdict is_stable(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel = 10000);
/// Yes when no reduct is stable.
TriVerdict is_active(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel = 10000);
/// t ≠ ⊥ and t with Ω in place of every ⊥ is active.
TriVerdict in_bot_instances(const StrictnessSignature& sig, const LambdaTree& t, std::size_t fuel = 10000);

/// Normal form under the S-rules: every node from which a Hole is reachable
/// along strict edges becomes a Hole. Cut and Unknown leaves never collapse.
LambdaTree strict_nf(const StrictnessSignature& sig, const LambdaTree& t);

enum class RegionOrder { LeftFirst, RightFirst };

/// Depth-bounded Böhm-like tree: active subtrees become ⊥, stable head
/// structure is kept, positions at depth >= `depth` become Cut and
/// undecided subtrees Unknown. With collapse_strict false the final
/// S-normalization is skipped (normal forms of β alone).
Approximant bohm_tree(const StrictnessSignature& sig, const LambdaTree& t, std::size_t depth,
                      std::size_t fuel = 10000, RegionOrder order = RegionOrder::LeftFirst,
                      bool collapse_strict = true);

/// ⊥-rule oracle backed by in_bot_instances, memoized per tree.
std::shared_ptr<const BotOracle> make_bot_oracle(const StrictnessSignature& sig, std::size_t fuel = 10000);

/// Normalization by shallowest-first contraction with β and ⊥-steps until no
/// redex is left above `depth`; the result is truncated at `depth`. Nodes
/// whose ⊥-verdict stays open, and unstable regions left when fuel runs out,
/// become Unknown. `fuel` bounds contractions and, separately, the total
/// work of all ⊥-verdicts.
Approximant m_route_normalize(const StrictnessSignature& sig, const LambdaTree& t, std::size_t depth,
                              std::size_t fuel = 10000);

}  // namespace ilc
