#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ilc/tree.hpp"

namespace ilc {

struct OrderVerdict {
  bool result = true;
  /// Location of a violated clause; present iff result is false.
  std::optional<Position> witness;

  explicit operator bool() const { return result; }
};

/// Raised by lub_chain when ts[index - 1] is not below ts[index].
class ChainError : public std::invalid_argument {
public:
  ChainError(const std::string& what, std::size_t index) : std::invalid_argument(what), index_(index) {}
  std::size_t index() const { return index_; }

private:
  std::size_t index_;
};

OrderVerdict tree_leq(const StrictnessSignature& sig, const LambdaTree& s, const LambdaTree& t);

/// Greatest lower bound of a nonempty finite set.
LambdaTree glb(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts);
/// Greatest common lower bound whose domain does not contain `excluded`.
LambdaTree glb_excluding(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts, const Position& excluded);

LambdaTree lub_chain(const StrictnessSignature& sig, const std::vector<LambdaTree>& ts);

/// Sources for liminf_approx. A generator returns nullopt when the sequence
/// ends; it is called from a single thread only.
struct FiniteSequence {
  std::vector<LambdaTree> items;
};
struct LassoSequence {
  std::vector<LambdaTree> prefix;
  std::vector<LambdaTree> period;
};
struct GeneratedSequence {
  std::function<std::optional<LambdaTree>()> next;
};
using SequenceSource = std::variant<FiniteSequence, LassoSequence, GeneratedSequence>;

/// Limit inferior. Exact for finite and lasso sources; generators are
/// followed for at most `fuel` elements and the depth-truncated running value
/// is accepted once it agrees over a confirmation window of 2*depth elements.
/// Positions that have not settled become Unknown leaves.
Approximant liminf_approx(const StrictnessSignature& sig, const SequenceSource& seq, std::size_t depth,
                          std::size_t fuel);

/// Running liminf over the tail of a finite prefix of a sequence: the
/// depth-truncated glb of the last window is compared with that of the last
/// two windows; positions where they differ become Unknown leaves.
Approximant liminf_window(const StrictnessSignature& sig, const std::vector<LambdaTree>& items, std::size_t depth);

/// Like truncate, but non-Hole nodes at depth >= d become Cut leaves.
LambdaTree truncate_marked(const StrictnessSignature& sig, const LambdaTree& t, std::size_t d);

}  // namespace ilc
