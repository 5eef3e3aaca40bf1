#include "ilc/convergence.hpp"

#include <algorithm>

namespace ilc {

std::string tri_name(Tri v) {
  switch (v) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

VolatileSets volatile_positions(const Trace& trace, std::size_t bound) {
  if (!trace.cycle_at) throw std::invalid_argument("volatile positions need a lasso trace");
  VolatileSets out;
  for (std::size_t i = *trace.cycle_at; i < trace.steps.size(); ++i) {
    const Position& p = trace.steps[i].position;
    std::size_t from = trace.sig.acut(p).size();
    for (std::size_t len = from; len <= std::min(p.size(), bound); ++len) out.all.insert(p.prefix(len));
  }
  for (const auto& p : out.all) {
    bool covered = false;
    for (std::size_t len = 0; len < p.size() && !covered; ++len) covered = out.all.count(p.prefix(len)) > 0;
    if (!covered) out.outermost.insert(p);
  }
  return out;
}

Approximant p_limit(const Trace& trace, std::size_t depth) {
  if (trace.is_closed()) return {trace.final_tree(), trace.steps.size()};
  if (trace.cycle_at) {
    std::vector<LambdaTree> period;
    for (std::size_t i = *trace.cycle_at; i < trace.steps.size(); ++i) period.push_back(trace.steps[i].context);
    return {glb(trace.sig, period), trace.steps.size()};
  }
  std::vector<LambdaTree> contexts;
  for (const auto& s : trace.steps) contexts.push_back(s.context);
  if (contexts.empty()) return {LambdaTree::leaf(TreeNode::unknown()), 0};
  return liminf_window(trace.sig, contexts, depth);
}

MVerdict analyze_m_convergence(const Trace& trace) {
  MVerdict v;
  if (trace.is_closed()) {
    v.value = Tri::Yes;
    v.diagnostic = "closed reduction of " + std::to_string(trace.steps.size()) + " steps";
    return v;
  }
  if (trace.cycle_at) {
    std::size_t least = SIZE_MAX;
    for (std::size_t i = *trace.cycle_at; i < trace.steps.size(); ++i) least = std::min(least, trace.steps[i].depth);
    v.value = Tri::No;
    v.witness_depth = least;
    v.diagnostic = "cycle from step " + std::to_string(*trace.cycle_at) + " contracts at depth " +
                   std::to_string(least) + " forever";
    return v;
  }
  v.value = Tri::Unknown;
  bool increasing = true;
  std::string depths;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (i > 0 && trace.steps[i].depth <= trace.steps[i - 1].depth) increasing = false;
    if (i < 8) depths += (i ? "," : "") + std::to_string(trace.steps[i].depth);
  }
  if (trace.steps.size() > 8) depths += ",...";
  v.diagnostic = "fuel exhausted after " + std::to_string(trace.steps.size()) + " steps; observed depths " + depths +
                 (increasing ? " are strictly increasing" : " are not strictly increasing");
  return v;
}

Approximant weak_limit(const StrictnessSignature& sig, const SequenceSource& trees, std::size_t depth,
                       std::size_t fuel) {
  return liminf_approx(sig, trees, depth, fuel);
}

Approximant weak_limit(const Trace& trace, std::size_t depth) {
  if (trace.is_closed()) return {trace.final_tree(), trace.steps.size()};
  std::vector<LambdaTree> trees{trace.start};
  for (const auto& s : trace.steps) trees.push_back(s.after);
  if (trace.cycle_at) {
    std::vector<LambdaTree> period(trees.begin() + static_cast<std::ptrdiff_t>(*trace.cycle_at), trees.end() - 1);
    return {glb(trace.sig, period), trace.steps.size()};
  }
  return liminf_window(trace.sig, trees, depth);
}

ConvergenceReport analyze(const Trace& trace, std::size_t depth, std::size_t bound) {
  ConvergenceReport r;
  r.m = analyze_m_convergence(trace);
  r.p_limit = p_limit(trace, depth);
  if (trace.cycle_at) {
    r.volatile_positions = volatile_positions(trace, bound);
    r.destructive = r.volatile_positions.all.count(Position{}) > 0;
  }
  return r;
}

}  // namespace ilc
