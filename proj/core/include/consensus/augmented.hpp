#pragma once

#include <string>
#include <vector>

#include "consensus/delays.hpp"
#include "consensus/matrix.hpp"

namespace consensus {

/// The delayed recursion on N agents becomes a zero-delay linear map on an
/// extended state of delta*N slots. Agent i owns the slot block
/// [delta*i, delta*i + delta - 1]; the slot at offset d inside the block
/// holds the value that is (delta - 1 - d) steps old, so the last slot of
/// each block carries the current value.
///
/// Rows of the extended matrix come in two kinds:
///   - aging rows (all but the last slot of a block) shift the neighbour
///     slot down: a single unit entry one column to the right;
///   - update rows (the last slot of each block) place each weight A(i, j)
///     at the slot of agent j whose age matches the delay in force, and in
///     particular keep A(i, i) on the diagonal.
template <class S>
struct AugmentedMatrix {
  int base_n = 0;
  int delta = 1;
  StochasticMatrix<S> matrix;

  int dim() const { return base_n * delta; }
  /// Slot carrying agent i's current value.
  int current_slot(int i) const { return delta * i + delta - 1; }
};

/// Column receiving the weight A(i, j) at step t: the staleness
/// t - tau_ij(t) selects the slot inside agent j's block.
inline int augmented_column(int j, int t, int tau_ij, int delta) {
  const int staleness = t - tau_ij;  // 0 .. delta-1 for a valid slice
  return delta * j + (delta - 1 - staleness);
}

template <class S>
void verify_augmented_structure(const AugmentedMatrix<S>& aug, const StochasticMatrix<S>& base,
                                const DelaySchedule& delays, int t);

/// Builds the extended matrix for step t from the base matrix and the delay
/// slice in force at t. The structural properties are re-checked on the
/// result before it is returned.
template <class S>
AugmentedMatrix<S> augment(const StochasticMatrix<S>& base, const DelaySchedule& delays, int t) {
  const int n = base.size();
  if (delays.n() != n) throw DimensionError("delay schedule does not match the matrix");
  if (t < 0 || t >= delays.horizon())
    throw ValidationError("no delay slice for step " + std::to_string(t));
  if (auto bad = delays.validate_slice(t); !bad.empty())
    throw ValidationError("invalid delay slice: " + bad.front().describe());

  const int delta = delays.delta();
  const int dim = n * delta;
  std::vector<S> e(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), S(0));
  auto at = [&](int r, int c) -> S& {
    return e[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)];
  };
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d + 1 < delta; ++d) {
      const int row = delta * i + d;
      at(row, row + 1) = S(1);
    }
    const int row = delta * i + delta - 1;
    for (int j = 0; j < n; ++j) {
      const S& a = base(i, j);
      if (a > S(0)) at(row, augmented_column(j, t, delays.tau(t, i, j), delta)) += a;
    }
  }
  AugmentedMatrix<S> aug{n, delta,
                         StochasticMatrix<S>::trusted(dim, std::move(e), base.alpha())};
  verify_augmented_structure(aug, base, delays, t);
  return aug;
}

/// Construction-time assertion of the structural properties. A failure here
/// is an implementation bug, not a data problem.
template <class S>
void verify_augmented_structure(const AugmentedMatrix<S>& aug, const StochasticMatrix<S>& base,
                                const DelaySchedule& delays, int t) {
  const int n = aug.base_n;
  const int delta = aug.delta;
  const int dim = aug.dim();
  const auto& m = aug.matrix;
  auto fail = [](const std::string& what) { throw std::logic_error("augmented matrix: " + what); };

  for (int row = 0; row < dim; ++row) {
    const bool update_row = (row % delta) == delta - 1;
    if (!update_row) {
      // Aging rows are exact unit rows pointing one slot to the right.
      for (int c = 0; c < dim; ++c) {
        const S expect = (c == row + 1) ? S(1) : S(0);
        if (!(m(row, c) == expect)) fail("aging row " + std::to_string(row) + " is not a unit shift");
      }
      continue;
    }
    const int i = row / delta;
    S sum(0);
    for (int j = 0; j < n; ++j) {
      // Each block holds at most one nonzero, equal to the base weight.
      int positives = 0;
      S block_sum(0);
      for (int d = 0; d < delta; ++d) {
        const S& v = m(row, delta * j + d);
        if (v > S(0)) ++positives;
        block_sum += v;
      }
      if (positives > 1) fail("row " + std::to_string(row) + " has a split block");
      if (!(block_sum == base(i, j))) fail("block sum mismatch at row " + std::to_string(row));
      sum += block_sum;
    }
    if (!scalar_traits<S>::near(sum, S(1))) fail("update row " + std::to_string(row) + " not stochastic");
    if (!(m(row, row) == base(i, i))) fail("diagonal mismatch at row " + std::to_string(row));
  }
  (void)delays;
  (void)t;
}

}  // namespace consensus
