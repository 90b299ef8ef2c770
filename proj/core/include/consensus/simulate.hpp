#pragma once

#include <optional>
#include <span>
#include <vector>

#include "consensus/augmented.hpp"
#include "consensus/trace.hpp"

namespace consensus {

/// Value history of one run. `values[k]` is the state at time start_t + k;
/// delayed runs start at 0 with dimension n, extended runs start at
/// delta - 1 with dimension delta * n.
template <class S>
struct Trajectory {
  int start_t = 0;
  std::vector<std::vector<S>> values;
  std::vector<S> osc_log;

  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  int end_t() const { return start_t + static_cast<int>(values.size()) - 1; }
  const std::vector<S>& at(int t) const {
    if (t < start_t || t > end_t()) throw ValidationError("trajectory time out of range");
    return values[static_cast<std::size_t>(t - start_t)];
  }
  /// The last `depth` states (fewer near the start).
  std::span<const std::vector<S>> window(int depth) const {
    const auto have = static_cast<int>(values.size());
    const auto take = std::min(depth, have);
    return {values.data() + (have - take), static_cast<std::size_t>(take)};
  }
};

/// Runs the delayed recursion: each agent replaces its value with the
/// weighted average of the values it received, reading each neighbour's
/// history at the send time the delay table dictates.
template <class S>
Trajectory<S> run_delayed(const ScenarioTrace<S>& trace, std::vector<S> x0) {
  if (static_cast<int>(x0.size()) != trace.n)
    throw DimensionError("initial vector length does not match the agent count");
  trace.validate();
  Trajectory<S> traj;
  traj.values.reserve(static_cast<std::size_t>(trace.horizon) + 1);
  traj.osc_log.reserve(static_cast<std::size_t>(trace.horizon) + 1);
  traj.values.push_back(std::move(x0));
  traj.osc_log.push_back(osc(traj.values.back()));
  for (int t = 0; t < trace.horizon; ++t) {
    const auto& a = trace.at(t);
    std::vector<S> next(static_cast<std::size_t>(trace.n), S(0));
    for (int i = 0; i < trace.n; ++i) {
      S acc(0);
      for (int j = 0; j < trace.n; ++j) {
        const S& w = a(i, j);
        if (!(w > S(0))) continue;
        const int tau = trace.delays.tau(t, i, j);
        acc += w * traj.values[static_cast<std::size_t>(tau)][static_cast<std::size_t>(j)];
      }
      next[static_cast<std::size_t>(i)] = std::move(acc);
    }
    traj.values.push_back(std::move(next));
    traj.osc_log.push_back(osc(traj.values.back()));
  }
  return traj;
}

/// Runs the same system through the extended zero-delay map: simulates the
/// first delta - 1 steps directly, packs the history into the extended
/// state, then iterates X(t+1) = Aug(t) X(t).
template <class S>
Trajectory<S> run_augmented(const ScenarioTrace<S>& trace, std::vector<S> x0) {
  if (static_cast<int>(x0.size()) != trace.n)
    throw DimensionError("initial vector length does not match the agent count");
  trace.validate();
  const int delta = trace.delta;
  if (trace.horizon < delta - 1)
    throw ValidationError("horizon too short to form the extended state");

  // Bootstrap: the plain recursion provides x(0..delta-1); the delay bound
  // clamps every send time into this prefix.
  Trajectory<S> boot;
  if (delta > 1) {
    ScenarioTrace<S> prefix;
    prefix.n = trace.n;
    prefix.delta = delta;
    prefix.alpha = trace.alpha;
    prefix.horizon = delta - 1;
    prefix.matrices.assign(trace.matrices.begin(), trace.matrices.begin() + (delta - 1));
    prefix.delays = DelaySchedule(
        trace.n, delta,
        std::vector<std::vector<std::vector<int>>>(
            trace.delays.table().begin(), trace.delays.table().begin() + (delta - 1)));
    prefix.meta = trace.meta;
    boot = run_delayed(prefix, x0);
  } else {
    boot.values.push_back(x0);
  }

  const int dim = trace.n * delta;
  std::vector<S> state(static_cast<std::size_t>(dim), S(0));
  for (int i = 0; i < trace.n; ++i)
    for (int o = 0; o < delta; ++o)
      state[static_cast<std::size_t>(delta * i + o)] =
          boot.values[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)];

  Trajectory<S> traj;
  traj.start_t = delta - 1;
  traj.values.push_back(std::move(state));
  traj.osc_log.push_back(osc(traj.values.back()));
  for (int t = delta - 1; t < trace.horizon; ++t) {
    auto aug = augment(trace.at(t), trace.delays, t);
    traj.values.push_back(aug.matrix.apply(traj.values.back()));
    traj.osc_log.push_back(osc(traj.values.back()));
  }
  return traj;
}

template <class S>
struct EquivalenceReport {
  S max_abs_gap{0};
  int argmax_t = 0;
};

/// Largest difference, over all agents and all fully-formed times, between
/// the delayed run and the current-value slots of the extended run. Exact
/// mode must report zero; float mode stays within eq_tol per unit of the
/// initial oscillation.
template <class S>
EquivalenceReport<S> equivalence_check(const ScenarioTrace<S>& trace, const std::vector<S>& x0) {
  auto direct = run_delayed(trace, x0);
  auto extended = run_augmented(trace, x0);
  EquivalenceReport<S> report;
  report.argmax_t = extended.start_t;
  for (int t = extended.start_t; t <= extended.end_t(); ++t) {
    for (int i = 0; i < trace.n; ++i) {
      S gap = abs_value(direct.at(t)[static_cast<std::size_t>(i)] -
                        extended.at(t)[static_cast<std::size_t>(trace.delta * i + trace.delta - 1)]);
      if (report.max_abs_gap < gap) {
        report.max_abs_gap = std::move(gap);
        report.argmax_t = t;
      }
    }
  }
  return report;
}

template <class S>
struct Verdict {
  bool converged = false;
  std::optional<int> t_hit;
  std::optional<S> limit;  // midpoint of the value range at t_hit
  bool max_nonincreasing = true;
  bool min_nondecreasing = true;
};

/// Declares convergence when the oscillation drops below tol within the
/// horizon, and reports whether the running max/min envelopes were monotone
/// over the stored states (exact for zero-delay and extended runs).
template <class S>
Verdict<S> consensus_verdict(const Trajectory<S>& traj, const S& tol) {
  if (!(tol > S(0))) throw ValidationError("tolerance must be positive");
  if (traj.values.empty()) throw DimensionError("verdict over an empty trajectory");
  Verdict<S> verdict;
  std::optional<S> prev_max, prev_min;
  for (std::size_t k = 0; k < traj.values.size(); ++k) {
    const auto& x = traj.values[k];
    S hi = x.front(), lo = x.front();
    for (const S& v : x) {
      if (hi < v) hi = v;
      if (v < lo) lo = v;
    }
    if (prev_max && !scalar_traits<S>::at_least(*prev_max, hi)) verdict.max_nonincreasing = false;
    if (prev_min && !scalar_traits<S>::at_least(lo, *prev_min)) verdict.min_nondecreasing = false;
    if (!verdict.converged && traj.osc_log[k] < tol) {
      verdict.converged = true;
      verdict.t_hit = traj.start_t + static_cast<int>(k);
      verdict.limit = (hi + lo) / S(2);
    }
    prev_max = std::move(hi);
    prev_min = std::move(lo);
  }
  return verdict;
}

}  // namespace consensus
