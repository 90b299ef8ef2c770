#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "consensus/augmented.hpp"
#include "consensus/trace.hpp"

namespace consensus {

/// Tallies of failed lemma-level checks. Every counter should stay at zero
/// on any run whose trace satisfies the corresponding hypotheses; a nonzero
/// tally indicates an implementation bug (or a trace run with the wrong
/// flags), never a legitimate domain outcome.
struct LemmaCounters {
  long seed_diagonal = 0;        // anchor step: own diagonal slot not positive
  long row_monotone = 0;         // positive rows of a column disappeared
  long agent_monotone = 0;       // positive agents of a column disappeared
  long decay_floor = 0;          // min positive entry fell by more than factor alpha
  long aging_mismatch = 0;       // shift rows of the product disagree with the recurrence
  long update_mismatch = 0;      // update rows of the product disagree with the recurrence
  long stall_incoming = 0;       // stalled column yet an edge enters its agent set
  long stall_block = 0;          // stalled column yet an agent block not fully positive
  long stall_outgoing_drop = 0;  // stalled, no outgoing edge, yet the floor decreased
  long growth_shortfall = 0;     // oriented steps: support grew too slowly with no full column
  long stall_without_full = 0;   // oriented step, whole support stalled, root column not full

  long total() const {
    return seed_diagonal + row_monotone + agent_monotone + decay_floor + aging_mismatch +
           update_mismatch + stall_incoming + stall_block + stall_outgoing_drop +
           growth_shortfall + stall_without_full;
  }
};

/// State of the running product P(t) = Aug(t)···Aug(t0) seen through the
/// positive entries of the per-agent columns: for each agent j, the set of
/// rows with a positive entry in j's current-value column, the subset of
/// agents among them, and the smallest positive entry of that column.
template <class S>
struct SupportSnapshot {
  int t = 0;
  int base_n = 0;
  int delta = 1;
  StochasticMatrix<S> product;
  std::vector<std::vector<char>> rows_positive;  // [j][m], m over the extended index
  std::vector<S> min_positive;                   // 0 when the column has no positive entry
  int support_size = 0;                          // sum over j of |rows_positive[j]|

  int column(int j) const { return delta * j + delta - 1; }
  bool column_full(int j) const {
    for (char c : rows_positive[static_cast<std::size_t>(j)])
      if (!c) return false;
    return true;
  }
  std::vector<int> positive_agents(int j) const {
    std::vector<int> out;
    for (int i = 0; i < base_n; ++i)
      if (rows_positive[static_cast<std::size_t>(j)][static_cast<std::size_t>(column(i))])
        out.push_back(i);
    return out;
  }
};

template <class S>
SupportSnapshot<S> make_snapshot(int t, int base_n, int delta, StochasticMatrix<S> product) {
  SupportSnapshot<S> s;
  s.t = t;
  s.base_n = base_n;
  s.delta = delta;
  s.product = std::move(product);
  const int dim = base_n * delta;
  s.rows_positive.assign(static_cast<std::size_t>(base_n),
                         std::vector<char>(static_cast<std::size_t>(dim), 0));
  s.min_positive.assign(static_cast<std::size_t>(base_n), S(0));
  for (int j = 0; j < base_n; ++j) {
    const int col = s.column(j);
    bool seen = false;
    for (int m = 0; m < dim; ++m) {
      const S& v = s.product(m, col);
      if (v > S(0)) {
        s.rows_positive[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = 1;
        ++s.support_size;
        if (!seen || v < s.min_positive[static_cast<std::size_t>(j)]) {
          s.min_positive[static_cast<std::size_t>(j)] = v;
          seen = true;
        }
      }
    }
  }
  return s;
}

/// Conclusions that must hold across one step whenever a column's positive
/// row set did not change ("stalled"):
///   (a) no edge of the next graph enters the column's agent set;
///   (b) every agent in the set has its whole slot block positive;
///   (c) with additionally no outgoing edge, the column floor cannot drop.
template <class S>
struct StallReport {
  struct Column {
    int j = 0;
    bool stalled = false;
    std::optional<std::pair<int, int>> incoming_edge;  // witness against (a)
    bool blocks_fully_positive = true;                 // (b)
    bool has_outgoing_edge = false;
    bool floor_nondecreasing = true;                   // (c); meaningful without outgoing edge
  };
  std::vector<Column> columns;

  bool lemmas_hold() const {
    for (const auto& c : columns) {
      if (!c.stalled) continue;
      if (c.incoming_edge || !c.blocks_fully_positive) return false;
      if (!c.has_outgoing_edge && !c.floor_nondecreasing) return false;
    }
    return true;
  }
};

template <class S>
StallReport<S> stationarity_checks(const SupportSnapshot<S>& before,
                                   const SupportSnapshot<S>& after, const Digraph& g_next) {
  if (before.base_n != after.base_n || before.delta != after.delta)
    throw DimensionError("stall check over mismatched snapshots");
  StallReport<S> report;
  const int n = before.base_n;
  const int delta = before.delta;
  for (int j = 0; j < n; ++j) {
    typename StallReport<S>::Column col;
    col.j = j;
    col.stalled = before.rows_positive[static_cast<std::size_t>(j)] ==
                  after.rows_positive[static_cast<std::size_t>(j)];
    if (col.stalled) {
      std::vector<char> in_set(static_cast<std::size_t>(n), 0);
      for (int i : before.positive_agents(j)) in_set[static_cast<std::size_t>(i)] = 1;
      for (const auto& [u, v] : g_next.edges()) {
        if (u == v) continue;
        if (!in_set[static_cast<std::size_t>(u)] && in_set[static_cast<std::size_t>(v)] &&
            !col.incoming_edge)
          col.incoming_edge = std::make_pair(u, v);
        if (in_set[static_cast<std::size_t>(u)] && !in_set[static_cast<std::size_t>(v)])
          col.has_outgoing_edge = true;
      }
      const int c = before.column(j);
      for (int i : before.positive_agents(j)) {
        for (int d = 0; d < delta; ++d) {
          if (!(before.product(delta * i + d, c) > S(0))) {
            col.blocks_fully_positive = false;
            break;
          }
        }
        if (!col.blocks_fully_positive) break;
      }
      if (!col.has_outgoing_edge) {
        col.floor_nondecreasing = scalar_traits<S>::at_least(
            after.min_positive[static_cast<std::size_t>(j)],
            before.min_positive[static_cast<std::size_t>(j)]);
      }
    }
    report.columns.push_back(std::move(col));
  }
  return report;
}

/// Advances the running product of extended matrices one step at a time and
/// maintains the per-column support state. With debug checks on, every step
/// re-derives the product rows through the shift/update recurrences,
/// compares them against a dense multiply, and tallies each lemma-level
/// conclusion whose hypotheses the caller has vouched for.
template <class S>
class SupportTracker {
 public:
  struct Options {
    bool debug_checks = true;
    /// Positive diagonals hold trace-wide: enables the seed, monotonicity
    /// and decay checks, whose proofs lean on self-loops.
    bool self_loops = false;
    std::optional<S> alpha;
    /// Every step's graph is oriented: enables the support-growth checks.
    bool oriented_steps = false;
  };

  SupportTracker(const ScenarioTrace<S>& trace, int t0, Options opt = {},
                 LemmaCounters* counters = nullptr)
      : trace_(&trace), opt_(std::move(opt)), counters_(counters), t0_(t0) {
    if (t0 < trace.delta - 1)
      throw ValidationError("tracker must start at or after the first fully-formed state");
    if (t0 >= trace.horizon) throw ValidationError("tracker start beyond the trace horizon");
    auto aug = augment(trace.at(t0), trace.delays, t0);
    state_ = make_snapshot(t0, trace.n, trace.delta, std::move(aug.matrix));
    theta_.assign(static_cast<std::size_t>(trace.n), std::nullopt);
    note_full_columns();
    if (opt_.self_loops) {
      for (int j = 0; j < trace.n; ++j) {
        if (!state_.rows_positive[static_cast<std::size_t>(j)]
                                 [static_cast<std::size_t>(state_.column(j))])
          bump(&LemmaCounters::seed_diagonal);
      }
    }
    check_growth();
  }

  int t() const { return state_.t; }
  int start() const { return t0_; }
  bool done() const { return state_.t + 1 >= trace_->horizon; }
  const SupportSnapshot<S>& snapshot() const { return state_; }
  const StochasticMatrix<S>& product() const { return state_.product; }
  bool column_full(int j) const { return state_.column_full(j); }
  const S& min_positive(int j) const { return state_.min_positive[static_cast<std::size_t>(j)]; }
  std::vector<int> positive_agents(int j) const { return state_.positive_agents(j); }
  int support_size() const { return state_.support_size; }
  std::optional<int> first_full_time(int j) const { return theta_[static_cast<std::size_t>(j)]; }
  bool all_columns_full() const {
    for (int j = 0; j < trace_->n; ++j)
      if (!column_full(j)) return false;
    return true;
  }

  void advance() {
    if (done()) throw ValidationError("tracker advanced past the trace horizon");
    const int next_t = state_.t + 1;
    const auto& base = trace_->at(next_t);
    const int n = trace_->n;
    const int delta = trace_->delta;
    const int dim = n * delta;

    // Shift/update recurrences, skipping the zero blocks of the extended matrix.
    std::vector<S> next(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), S(0));
    auto out_at = [&](int r, int c) -> S& {
      return next[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) +
                  static_cast<std::size_t>(c)];
    };
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d + 1 < delta; ++d) {
        const int row = delta * i + d;
        for (int c = 0; c < dim; ++c) out_at(row, c) = state_.product(row + 1, c);
      }
      const int row = delta * i + delta - 1;
      for (int k = 0; k < n; ++k) {
        const S& a = base(i, k);
        if (!(a > S(0))) continue;
        const int src = augmented_column(k, next_t, trace_->delays.tau(next_t, i, k), delta);
        for (int c = 0; c < dim; ++c) out_at(row, c) += a * state_.product(src, c);
      }
    }
    auto next_state = make_snapshot(next_t, n, delta,
                                    StochasticMatrix<S>::trusted(dim, std::move(next)));

    if (opt_.debug_checks) run_step_checks(base, next_state);
    state_ = std::move(next_state);
    note_full_columns();
    check_growth();
  }

 private:
  void bump(long LemmaCounters::* member) {
    if (counters_) ++(counters_->*member);
  }

  void note_full_columns() {
    for (int j = 0; j < trace_->n; ++j)
      if (!theta_[static_cast<std::size_t>(j)] && state_.column_full(j))
        theta_[static_cast<std::size_t>(j)] = state_.t;
  }

  void check_growth() {
    if (!(opt_.debug_checks && opt_.oriented_steps && opt_.self_loops)) return;
    bool any_full = false;
    for (int j = 0; j < trace_->n && !any_full; ++j) any_full = state_.column_full(j);
    if (!any_full && state_.support_size < trace_->n + (state_.t - t0_))
      bump(&LemmaCounters::growth_shortfall);
  }

  void run_step_checks(const StochasticMatrix<S>& base, const SupportSnapshot<S>& next_state) {
    const int n = trace_->n;
    const int delta = trace_->delta;
    const int dim = n * delta;
    const int next_t = next_state.t;

    // Independent route: materialize the extended matrix and compare the
    // dense product row by row against the recurrence-built one.
    auto aug = augment(base, trace_->delays, next_t);
    StochasticMatrix<S> dense = aug.matrix * state_.product;
    for (int r = 0; r < dim; ++r) {
      const bool update_row = (r % delta) == delta - 1;
      for (int c = 0; c < dim; ++c) {
        if (dense(r, c) == next_state.product(r, c)) continue;
        bump(update_row ? &LemmaCounters::update_mismatch : &LemmaCounters::aging_mismatch);
        throw std::logic_error("support tracker: product recurrence mismatch at row " +
                               std::to_string(r));
      }
    }

    if (opt_.self_loops) {
      for (int j = 0; j < n; ++j) {
        const auto& before = state_.rows_positive[static_cast<std::size_t>(j)];
        const auto& after = next_state.rows_positive[static_cast<std::size_t>(j)];
        for (int m = 0; m < dim; ++m) {
          if (before[static_cast<std::size_t>(m)] && !after[static_cast<std::size_t>(m)]) {
            bump(&LemmaCounters::row_monotone);
            break;
          }
        }
        const int col_j = state_.column(j);
        for (int i = 0; i < n; ++i) {
          const auto cur = static_cast<std::size_t>(state_.column(i));
          if (before[cur] && !after[cur]) {
            bump(&LemmaCounters::agent_monotone);
            break;
          }
        }
        if (opt_.alpha) {
          const S& floor_before = state_.min_positive[static_cast<std::size_t>(j)];
          if (floor_before > S(0) &&
              !scalar_traits<S>::at_least(next_state.min_positive[static_cast<std::size_t>(j)],
                                          *opt_.alpha * floor_before))
            bump(&LemmaCounters::decay_floor);
        }
        (void)col_j;
      }
    }

    Digraph g_next = comm_graph(base);
    auto stall = stationarity_checks(state_, next_state, g_next);
    for (const auto& col : stall.columns) {
      if (!col.stalled) continue;
      if (col.incoming_edge) bump(&LemmaCounters::stall_incoming);
      if (!col.blocks_fully_positive) bump(&LemmaCounters::stall_block);
      if (!col.has_outgoing_edge && !col.floor_nondecreasing)
        bump(&LemmaCounters::stall_outgoing_drop);
    }

    if (opt_.oriented_steps) {
      bool whole_support_stalled = true;
      for (const auto& col : stall.columns) whole_support_stalled &= col.stalled;
      if (whole_support_stalled) {
        Condensation cond = condense(g_next);
        auto sink_comps = sinks(cond.dag);
        if (sink_comps.size() == 1) {
          for (int root : cond.components[static_cast<std::size_t>(sink_comps.front())])
            if (!state_.column_full(root)) bump(&LemmaCounters::stall_without_full);
        }
      }
    }
  }

  const ScenarioTrace<S>* trace_;
  Options opt_;
  LemmaCounters* counters_;
  int t0_;
  SupportSnapshot<S> state_;
  std::vector<std::optional<int>> theta_;
};

/// Earliest time each agent's column becomes entirely positive, scanning
/// the trace from t0; absent when the horizon ends first.
template <class S>
std::vector<std::optional<int>> full_column_times(const ScenarioTrace<S>& trace, int t0,
                                                  typename SupportTracker<S>::Options opt = {},
                                                  LemmaCounters* counters = nullptr) {
  SupportTracker<S> tracker(trace, t0, opt, counters);
  while (!tracker.done() && !tracker.all_columns_full()) tracker.advance();
  std::vector<std::optional<int>> out;
  out.reserve(static_cast<std::size_t>(trace.n));
  for (int j = 0; j < trace.n; ++j) out.push_back(tracker.first_full_time(j));
  return out;
}

}  // namespace consensus
