#pragma once

#include <optional>
#include <set>
#include <stdexcept>

#include "ilc/convergence.hpp"
#include "ilc/meaningless.hpp"
#include "ilc/rewriting.hpp"

namespace ilc {

struct RedexSet {
  LambdaTree tree;
  std::set<Position> positions;
};

/// Throws std::invalid_argument unless every position is a β- or S-redex
/// and the signature keeps residuals well defined (a0 = 1 or a1 = 0).
void validate_redex_set(const StrictnessSignature& sig, const RedexSet& rs);

/// Descendants across one step. Positions longer than max_len are dropped.
std::set<Position> step_descendants(const Step& step, const std::set<Position>& u, std::size_t max_len = 64);
/// Descendants across a finite trace or a lasso.
std::set<Position> descendants(const Trace& trace, const std::set<Position>& u, std::size_t max_len = 64);
/// The unique q of the start tree with p among its descendants (finite traces).
Position ancestor(const Trace& trace, const Position& p);

struct Development {
  Trace trace;
  LambdaTree result;
};

/// Complete development: parallel-outermost contraction of residuals, then
/// S-normalization.
Development develop(const StrictnessSignature& sig, const RedexSet& rs, std::size_t fuel = 10000);

/// Result of the complete development read off the paths of a finite tree.
LambdaTree path_labels(const StrictnessSignature& sig, const RedexSet& rs);

/// Raised when a tile of the strip diagram cannot be closed.
class StripError : public std::runtime_error {
public:
  StripError(const std::string& what, std::size_t tile) : std::runtime_error(what), tile_(tile) {}
  std::size_t tile() const { return tile_; }

private:
  std::size_t tile_;
};

struct StripJoin {
  /// Development of the single step's residuals after the long trace.
  Trace from_long;
  /// Projection of the long trace after the single step.
  Trace from_single;
  LambdaTree common;
};

StripJoin strip_join(const StrictnessSignature& sig, const Trace& long_trace, const Step& single,
                     std::size_t fuel = 10000);

enum class JoinKind { Joined, Failed, Unknown };
std::string join_kind_name(JoinKind k);  // "joined", "failed", "unknown"

struct JoinVerdict {
  JoinKind kind = JoinKind::Unknown;
  /// Normalized endpoints.
  Approximant left, right;
  std::optional<Position> mismatch;
};

/// Normalizes the limits of both traces and compares them on the region
/// where both are defined. S-collapse is applied only for rule systems with S.
JoinVerdict joinability(const StrictnessSignature& sig, const Trace& left, const Trace& right, std::size_t fuel,
                        std::size_t depth);

}  // namespace ilc
