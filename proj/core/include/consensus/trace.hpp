#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "consensus/delays.hpp"
#include "consensus/matrix.hpp"

namespace consensus {

struct TraceMeta {
  std::string family = "custom";
  std::uint64_t seed = 0;
  /// Set on traces that deliberately drop the self-loop assumption; the
  /// validator and the lemma-level debug checks key off it.
  bool violates_self_loops = false;
  /// Exact period of the matrix sequence when known; lets the suffix-union
  /// monitors decide recurrence from one period instead of witnessing.
  std::optional<int> period;
  /// Shifting counterexample only: step indices where a phase ends.
  std::vector<int> phase_boundaries;
  std::map<std::string, std::string> params;

  bool operator==(const TraceMeta&) const = default;
};

/// A finite run of the model: one weight matrix and one delay slice per
/// step, plus the declared positive-entry floor alpha.
template <class S>
struct ScenarioTrace {
  int n = 0;
  int delta = 1;
  std::optional<S> alpha;
  int horizon = 0;  // number of steps; matrices[t] acts between t and t+1
  std::vector<StochasticMatrix<S>> matrices;
  DelaySchedule delays{1, 1, {}};
  TraceMeta meta;

  const StochasticMatrix<S>& at(int t) const {
    if (t < 0 || t >= horizon) throw ValidationError("step index out of range: " + std::to_string(t));
    return matrices[static_cast<std::size_t>(t)];
  }

  Digraph graph(int t) const { return comm_graph(at(t)); }

  bool operator==(const ScenarioTrace& other) const = default;

  /// Enforces the shape and the standing assumptions: per-matrix invariants
  /// were checked at construction; this adds trace-level checks (sizes,
  /// delay validity, positive diagonals unless flagged, alpha floor).
  void validate() const {
    if (n < 1) throw ValidationError("trace needs at least one agent");
    if (delta < 1) throw ValidationError("trace delay bound must be positive");
    if (horizon < 1) throw ValidationError("trace needs at least one step");
    if (static_cast<int>(matrices.size()) != horizon)
      throw DimensionError("matrix count does not match horizon");
    for (const auto& m : matrices)
      if (m.size() != n) throw DimensionError("matrix dimension does not match agent count");
    if (delays.n() != n || delays.horizon() != horizon || delays.delta() != delta)
      throw DimensionError("delay schedule shape does not match the trace");
    delays.require_valid();
    if (!meta.violates_self_loops) {
      for (int t = 0; t < horizon; ++t)
        for (int i = 0; i < n; ++i)
          if (!(at(t)(i, i) > S(0)))
            throw ValidationError("zero diagonal at step " + std::to_string(t) + ", agent " +
                                  std::to_string(i) + " (flag violates_self_loops to allow)");
    }
    if (alpha) {
      for (int t = 0; t < horizon; ++t)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const S& a = at(t)(i, j);
            if (a > S(0) && !scalar_traits<S>::at_least(a, *alpha))
              throw ValidationError("entry below the declared alpha at step " + std::to_string(t));
          }
    }
  }
};

inline ScenarioTrace<double> to_float(const ScenarioTrace<Rat>& trace) {
  ScenarioTrace<double> out;
  out.n = trace.n;
  out.delta = trace.delta;
  if (trace.alpha) out.alpha = trace.alpha->to_double();
  out.horizon = trace.horizon;
  out.matrices.reserve(trace.matrices.size());
  for (const auto& m : trace.matrices) {
    std::vector<double> entries;
    entries.reserve(m.entries().size());
    for (const auto& v : m.entries()) entries.push_back(v.to_double());
    // Conversion rounds each entry separately; the row sums stay well inside
    // the float-mode tolerance but the alpha floor may now sit 1 ulp above a
    // converted entry, so the floor rides along via the tolerant check.
    out.matrices.push_back(StochasticMatrix<double>(m.size(), std::move(entries), out.alpha));
  }
  out.delays = trace.delays;
  out.meta = trace.meta;
  return out;
}

}  // namespace consensus
