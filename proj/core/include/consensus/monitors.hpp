#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "consensus/simulate.hpp"
#include "consensus/support.hpp"
#include "consensus/trace.hpp"

namespace consensus {

/// Verdict of one condition over one trace. Negative verdicts always carry
/// the first violating step and a reason; conditions that quantify over
/// infinite suffixes are decided in "witnessed" semantics over the finite
/// horizon (or exactly, when the trace declares its period) and say so.
struct ConditionReport {
  std::string condition;
  bool holds = false;
  bool witnessed = false;  // finite-horizon witness rather than a full decision
  std::optional<int> first_violation;
  std::string reason;
  std::optional<int> anchor;          // fixed witness node, when the condition names one
  std::vector<int> step_witness;      // per-step witness node, when applicable
  std::optional<int> witnessed_up_to; // last start time covered by a suffix check
  bool weak_variant = false;          // per-step relaxation of the fixed-anchor condition
  std::map<std::string, int> params;
  std::vector<std::string> notes;
};

namespace detail {

inline void flag_missing_self_loops(const TraceMeta& meta, ConditionReport& report) {
  if (meta.violates_self_loops)
    report.notes.push_back("trace is flagged violates_self_loops: the convergence theorems "
                           "for this condition do not apply to it");
}

}  // namespace detail

/// Condition "C": the communication graph of every step is oriented.
/// Records the smallest orientation root per step.
template <class S>
ConditionReport check_oriented(const ScenarioTrace<S>& trace) {
  ConditionReport report;
  report.condition = "C";
  report.holds = true;
  for (int t = 0; t < trace.horizon; ++t) {
    auto root = orientation_root(trace.graph(t));
    if (!root) {
      report.holds = false;
      report.first_violation = t;
      report.reason = "graph at step " + std::to_string(t) + " has no node reachable from all";
      report.step_witness.clear();
      return report;
    }
    report.step_witness.push_back(*root);
  }
  detail::flag_missing_self_loops(trace.meta, report);
  return report;
}

/// Condition "D2": the communication graph of every step is completely
/// reducible (every weak component strongly connected).
template <class S>
ConditionReport check_completely_reducible(const ScenarioTrace<S>& trace) {
  ConditionReport report;
  report.condition = "D2";
  report.holds = true;
  for (int t = 0; t < trace.horizon; ++t) {
    if (!is_completely_reducible(trace.graph(t))) {
      report.holds = false;
      report.first_violation = t;
      report.reason = "a weak component at step " + std::to_string(t) + " is not strongly connected";
      return report;
    }
  }
  detail::flag_missing_self_loops(trace.meta, report);
  return report;
}

/// Condition "D1": every suffix edge union is strongly connected. Over a
/// finite trace this is decided in witness semantics: the report carries the
/// largest start time whose suffix union passes (suffixes shrink as the
/// start moves right, so the passing starts form a prefix). A trace with a
/// declared period is decided exactly from one period's union, which equals
/// the set of edges recurring forever.
template <class S>
ConditionReport check_union_strong(const ScenarioTrace<S>& trace, int from_t = 0) {
  ConditionReport report;
  report.condition = "D1";
  report.params["from_t"] = from_t;
  if (from_t < 0 || from_t >= trace.horizon)
    throw ValidationError("from_t outside the trace horizon");

  if (trace.meta.period && *trace.meta.period <= trace.horizon) {
    Digraph recurring(trace.n);
    for (int t = trace.horizon - *trace.meta.period; t < trace.horizon; ++t)
      for (const auto& [u, v] : trace.graph(t).edges()) recurring.add_edge(u, v);
    report.holds = is_strongly_connected(recurring);
    if (report.holds) {
      report.notes.push_back("decided exactly from the declared period");
    } else {
      report.first_violation = from_t;
      report.reason = "the union of one period's edges is not strongly connected";
    }
    detail::flag_missing_self_loops(trace.meta, report);
    return report;
  }

  // Walk suffix unions from the right; strong connectivity is monotone in
  // the edge set, so the first failing start bounds all later ones.
  Digraph suffix(trace.n);
  std::optional<int> last_good;
  for (int t = trace.horizon - 1; t >= from_t; --t) {
    for (const auto& [u, v] : trace.graph(t).edges()) suffix.add_edge(u, v);
    if (is_strongly_connected(suffix)) {
      last_good = t;  // all starts <= t pass once this one does
      break;
    }
  }
  if (!last_good) {
    report.holds = false;
    report.first_violation = from_t;
    report.reason = "no suffix union from " + std::to_string(from_t) + " is strongly connected";
  } else {
    report.holds = true;
    report.witnessed = true;
    report.witnessed_up_to = *last_good;
    report.notes.push_back("finite-horizon witness: suffixes starting after step " +
                           std::to_string(*last_good) + " were not checked against recurrence");
  }
  detail::flag_missing_self_loops(trace.meta, report);
  return report;
}

enum class WindowKind { oriented, completely_reducible };

/// Windowed conditions: from t0 on, the communication graph of every
/// product of phi consecutive matrices is oriented (kind C) or completely
/// reducible (kind D2). phi = 1 degenerates to the per-step checkers.
template <class S>
ConditionReport check_windowed(const ScenarioTrace<S>& trace, WindowKind kind, int t0, int phi) {
  ConditionReport report;
  report.condition = kind == WindowKind::oriented ? "diamondC" : "diamondD2";
  report.params["T0"] = t0;
  report.params["Phi"] = phi;
  if (phi < 1) throw ValidationError("window length must be a positive integer");
  if (t0 < 0 || t0 + phi > trace.horizon)
    throw ValidationError("window parameters exceed the trace horizon");
  report.holds = true;
  for (int t = t0; t + phi <= trace.horizon; ++t) {
    StochasticMatrix<S> block = trace.at(t);
    for (int k = 1; k < phi; ++k) block = trace.at(t + k) * block;
    Digraph h = comm_graph(block);
    bool ok = kind == WindowKind::oriented ? orientation_root(h).has_value()
                                           : is_completely_reducible(h);
    if (!ok) {
      report.holds = false;
      report.first_violation = t;
      report.reason = std::string("window product starting at ") + std::to_string(t) +
                      (kind == WindowKind::oriented ? " is not oriented" : " is not completely reducible");
      return report;
    }
  }
  detail::flag_missing_self_loops(trace.meta, report);
  return report;
}

/// Smallest window length in [1, phi_max] that makes the windowed condition
/// hold from t0, if any.
template <class S>
std::optional<int> smallest_window(const ScenarioTrace<S>& trace, WindowKind kind, int t0,
                                   int phi_max) {
  for (int phi = 1; phi <= phi_max && t0 + phi <= trace.horizon; ++phi)
    if (check_windowed(trace, kind, t0, phi).holds) return phi;
  return std::nullopt;
}

/// Condition "D*": one fixed node j works for the whole trace such that
/// (1) every suffix edge union is oriented toward j (witness semantics as
/// for "D1"), and (2) at every step, j's weak component is oriented toward
/// j and every other weak component is strongly connected. The report also
/// notes whether the weaker per-step variant (a possibly different witness
/// at every step) holds.
template <class S>
ConditionReport check_fixed_anchor(const ScenarioTrace<S>& trace, int from_t = 0) {
  ConditionReport report;
  report.condition = "Dstar";
  report.params["from_t"] = from_t;
  if (from_t < 0 || from_t >= trace.horizon)
    throw ValidationError("from_t outside the trace horizon");

  // Part (2) for every candidate anchor at every step, via the subset-free
  // structural characterization.
  std::vector<std::vector<char>> anchored_at(
      static_cast<std::size_t>(trace.horizon), std::vector<char>(static_cast<std::size_t>(trace.n), 0));
  report.weak_variant = true;
  for (int t = 0; t < trace.horizon; ++t) {
    int witness = -1;
    for (int j = 0; j < trace.n; ++j) {
      bool ok = is_anchored(trace.graph(t), j, AnchorMethod::structural);
      anchored_at[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = ok ? 1 : 0;
      if (ok && witness < 0) witness = j;
    }
    if (witness < 0) report.weak_variant = false;
    report.step_witness.push_back(witness);
  }
  if (!report.weak_variant) report.step_witness.clear();

  // Suffix-union orientation per candidate; edges only grow as the start
  // moves left, so scan once from the right.
  std::vector<std::optional<int>> oriented_up_to(static_cast<std::size_t>(trace.n));
  {
    Digraph suffix(trace.n);
    std::vector<char> found(static_cast<std::size_t>(trace.n), 0);
    for (int t = trace.horizon - 1; t >= from_t; --t) {
      for (const auto& [u, v] : trace.graph(t).edges()) suffix.add_edge(u, v);
      for (int j = 0; j < trace.n; ++j) {
        if (!found[static_cast<std::size_t>(j)] && is_oriented_toward(suffix, j)) {
          found[static_cast<std::size_t>(j)] = 1;
          oriented_up_to[static_cast<std::size_t>(j)] = t;
        }
      }
    }
  }

  for (int j = 0; j < trace.n; ++j) {
    bool per_step = true;
    for (int t = 0; t < trace.horizon && per_step; ++t)
      per_step = anchored_at[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] != 0;
    if (!per_step) continue;
    if (!oriented_up_to[static_cast<std::size_t>(j)]) continue;
    report.holds = true;
    report.witnessed = true;
    report.anchor = j;
    report.witnessed_up_to = oriented_up_to[static_cast<std::size_t>(j)];
    break;
  }
  if (!report.holds) {
    report.first_violation = from_t;
    report.reason = report.weak_variant
                        ? "per-step witnesses exist but no single node works for the whole trace"
                        : "some step has no valid witness at all";
    if (report.weak_variant)
      report.notes.push_back("weak per-step variant holds; see step_witness");
  }
  detail::flag_missing_self_loops(trace.meta, report);
  return report;
}

/// Bounded intercommunication: every edge that appears anywhere in the
/// trace appears at least once in every window of phi consecutive steps
/// (finite-trace reading).
template <class S>
ConditionReport check_intercomm_bound(const ScenarioTrace<S>& trace, int phi) {
  ConditionReport report;
  report.condition = "bic";
  report.params["Phi"] = phi;
  if (phi < 1) throw ValidationError("window length must be a positive integer");
  if (trace.horizon < phi) throw ValidationError("trace shorter than one window");
  std::vector<Digraph> all;
  all.reserve(static_cast<std::size_t>(trace.horizon));
  for (int t = 0; t < trace.horizon; ++t) all.push_back(trace.graph(t));
  Digraph ever = union_graph(all);
  report.holds = true;
  for (int t = 0; t + phi <= trace.horizon; ++t) {
    std::vector<Digraph> window;
    window.reserve(static_cast<std::size_t>(phi));
    for (int k = 0; k < phi; ++k) window.push_back(trace.graph(t + k));
    Digraph seen = union_graph(window);
    for (const auto& [u, v] : ever.edges()) {
      if (!seen.has_edge(u, v)) {
        report.holds = false;
        report.first_violation = t;
        report.reason = "edge (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                        ") misses the window starting at " + std::to_string(t);
        return report;
      }
    }
  }
  return report;
}

/// Standing assumptions of the model, re-checked over a loaded trace:
/// stochastic rows, positive diagonals, the declared positive-entry floor,
/// and the delay rules.
template <class S>
std::vector<ConditionReport> check_assumptions(const ScenarioTrace<S>& trace) {
  std::vector<ConditionReport> reports;

  ConditionReport a1;
  a1.condition = "A1";
  a1.holds = true;
  for (int t = 0; t < trace.horizon && a1.holds; ++t) {
    const auto& m = trace.at(t);
    for (int i = 0; i < trace.n && a1.holds; ++i) {
      S sum(0);
      bool nonneg = true;
      for (int j = 0; j < trace.n; ++j) {
        if (m(i, j) < S(0)) nonneg = false;
        sum += m(i, j);
      }
      if (!nonneg || !scalar_traits<S>::near(sum, S(1))) {
        a1.holds = false;
        a1.first_violation = t;
        a1.reason = "row " + std::to_string(i) + " at step " + std::to_string(t) +
                    " is not a probability row";
      }
    }
  }
  reports.push_back(std::move(a1));

  ConditionReport a2;
  a2.condition = "A2";
  a2.holds = true;
  for (int t = 0; t < trace.horizon && a2.holds; ++t)
    for (int i = 0; i < trace.n; ++i)
      if (!(trace.at(t)(i, i) > S(0))) {
        a2.holds = false;
        a2.first_violation = t;
        a2.reason = "agent " + std::to_string(i + 1) + " has no self-loop at step " + std::to_string(t);
        break;
      }
  reports.push_back(std::move(a2));

  ConditionReport a3;
  a3.condition = "A3";
  if (!trace.alpha) {
    a3.holds = false;
    a3.reason = "trace declares no positive-entry floor";
  } else {
    a3.holds = true;
    for (int t = 0; t < trace.horizon && a3.holds; ++t) {
      const auto& m = trace.at(t);
      for (int i = 0; i < trace.n && a3.holds; ++i)
        for (int j = 0; j < trace.n; ++j) {
          if (m(i, j) > S(0) && !scalar_traits<S>::at_least(m(i, j), *trace.alpha)) {
            a3.holds = false;
            a3.first_violation = t;
            a3.reason = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") at step " + std::to_string(t) + " undercuts the declared floor";
            break;
          }
        }
    }
  }
  reports.push_back(std::move(a3));

  ConditionReport b;
  b.condition = "B";
  auto violations = trace.delays.validate();
  b.holds = violations.empty();
  if (!b.holds) {
    b.first_violation = violations.front().t;
    b.reason = violations.front().describe();
  }
  b.params["Delta"] = trace.delta;
  reports.push_back(std::move(b));

  return reports;
}

}  // namespace consensus
