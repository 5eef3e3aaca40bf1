#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ilc/order.hpp"
#include "ilc/rewriting.hpp"

namespace ilc {

enum class Tri { Yes, No, Unknown };
std::string tri_name(Tri v);  // "yes", "no", "unknown"

struct MVerdict {
  Tri value = Tri::Unknown;
  /// For No: a depth contracted cofinally.
  std::optional<std::size_t> witness_depth;
  std::string diagnostic;
};

struct VolatileSets {
  std::set<Position> all;
  std::set<Position> outermost;
};

struct ConvergenceReport {
  MVerdict m;
  Approximant p_limit;
  VolatileSets volatile_positions;
  bool destructive = false;
};

/// Volatile and outermost-volatile positions of a lasso, up to length bound.
/// Throws std::invalid_argument for traces without a cycle.
VolatileSets volatile_positions(const Trace& trace, std::size_t bound = 64);

/// Limit inferior of the reduction contexts. Exact for closed traces and
/// lassos; fuel-limited traces are approximated at the given depth.
Approximant p_limit(const Trace& trace, std::size_t depth);

MVerdict analyze_m_convergence(const Trace& trace);

/// Limit inferior of the trees themselves (not of the contexts).
Approximant weak_limit(const StrictnessSignature& sig, const SequenceSource& trees, std::size_t depth,
                       std::size_t fuel);
Approximant weak_limit(const Trace& trace, std::size_t depth);

ConvergenceReport analyze(const Trace& trace, std::size_t depth, std::size_t bound = 64);

}  // namespace ilc
