#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "consensus/digraph.hpp"
#include "consensus/errors.hpp"
#include "consensus/scalar.hpp"

namespace consensus {

/// Row-stochastic square matrix: non-negative entries, unit row sums
/// (exact, or within scalar_traits<double>::eq_tol in float mode). An
/// optional alpha records a uniform lower bound on the positive entries;
/// when present it is enforced, not assumed. Violations are reported as
/// errors rather than repaired, so generator bugs surface immediately.
template <class S>
class StochasticMatrix {
 public:
  StochasticMatrix(int n, std::vector<S> entries, std::optional<S> alpha = std::nullopt)
      : n_(n), e_(std::move(entries)), alpha_(std::move(alpha)) {
    validate();
  }

  static StochasticMatrix from_rows(const std::vector<std::vector<S>>& rows,
                                    std::optional<S> alpha = std::nullopt) {
    std::vector<S> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw DimensionError("ragged matrix rows");
      for (const auto& v : row) flat.push_back(v);
    }
    return StochasticMatrix(static_cast<int>(rows.size()), std::move(flat), std::move(alpha));
  }

  static StochasticMatrix identity(int n) {
    std::vector<S> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), S(0));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = S(1);
    return StochasticMatrix(Unchecked{}, n, std::move(e), S(1));
  }

  /// Rank-one matrix with every row equal to (1/n, ..., 1/n).
  static StochasticMatrix uniform(int n) {
    std::vector<S> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    S w = S(1) / S(n);
    for (auto& v : e) v = w;
    return StochasticMatrix(Unchecked{}, n, std::move(e), w);
  }

  /// Wraps already-verified entries (used for computed products, whose
  /// float row sums drift beyond the input tolerance by design).
  static StochasticMatrix trusted(int n, std::vector<S> entries,
                                  std::optional<S> alpha = std::nullopt) {
    return StochasticMatrix(Unchecked{}, n, std::move(entries), std::move(alpha));
  }

  int size() const { return n_; }
  const S& operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  }
  const std::optional<S>& alpha() const { return alpha_; }
  const std::vector<S>& entries() const { return e_; }

  std::vector<S> row(int i) const {
    return std::vector<S>(e_.begin() + static_cast<std::ptrdiff_t>(i) * n_,
                          e_.begin() + static_cast<std::ptrdiff_t>(i + 1) * n_);
  }

  std::vector<S> apply(std::span<const S> x) const {
    if (static_cast<int>(x.size()) != n_) throw DimensionError("matrix/vector size mismatch");
    std::vector<S> y(static_cast<std::size_t>(n_), S(0));
    for (int i = 0; i < n_; ++i) {
      S acc(0);
      for (int j = 0; j < n_; ++j) {
        const S& a = (*this)(i, j);
        if (!(a == S(0))) acc += a * x[static_cast<std::size_t>(j)];
      }
      y[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return y;
  }

  friend StochasticMatrix operator*(const StochasticMatrix& lhs, const StochasticMatrix& rhs) {
    if (lhs.n_ != rhs.n_) throw DimensionError("matrix product size mismatch");
    const int n = lhs.n_;
    std::vector<S> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), S(0));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const S& a = lhs(i, k);
        if (a == S(0)) continue;
        const std::size_t row_k = static_cast<std::size_t>(k) * static_cast<std::size_t>(n);
        const std::size_t row_i = static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
        for (int j = 0; j < n; ++j)
          e[row_i + static_cast<std::size_t>(j)] += a * rhs.e_[row_k + static_cast<std::size_t>(j)];
      }
    }
    return StochasticMatrix(Unchecked{}, n, std::move(e), std::nullopt);
  }

  bool operator==(const StochasticMatrix& other) const {
    return n_ == other.n_ && e_ == other.e_;
  }

 private:
  struct Unchecked {};
  StochasticMatrix(Unchecked, int n, std::vector<S> entries, std::optional<S> alpha)
      : n_(n), e_(std::move(entries)), alpha_(std::move(alpha)) {}

  void validate() const {
    if (n_ < 1) throw DimensionError("matrix dimension must be positive");
    if (e_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
      throw DimensionError("entry count does not match dimension");
    for (int i = 0; i < n_; ++i) {
      S sum(0);
      for (int j = 0; j < n_; ++j) {
        const S& a = (*this)(i, j);
        if (a < S(0))
          throw ValidationError("negative entry at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
        sum += a;
      }
      if (!scalar_traits<S>::near(sum, S(1)))
        throw ValidationError("row " + std::to_string(i) + " does not sum to 1");
    }
    if (alpha_) {
      if (!(*alpha_ > S(0)) || *alpha_ > S(1))
        throw ValidationError("alpha must lie in (0, 1]");
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          const S& a = (*this)(i, j);
          if (a > S(0) && !scalar_traits<S>::at_least(a, *alpha_))
            throw ValidationError("positive entry below alpha at (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
        }
    }
  }

  int n_;
  std::vector<S> e_;
  std::optional<S> alpha_;
};

/// Oscillation of a vector: max entry minus min entry. Zero exactly on the
/// constant vectors.
template <class S>
S osc(std::span<const S> x) {
  if (x.empty()) throw DimensionError("oscillation of an empty vector");
  const S* lo = &x[0];
  const S* hi = &x[0];
  for (const S& v : x) {
    if (v < *lo) lo = &v;
    if (*hi < v) hi = &v;
  }
  return *hi - *lo;
}

template <class S>
S osc(const std::vector<S>& x) {
  return osc(std::span<const S>(x));
}

template <class S>
struct SeminormResult {
  S value{0};
  std::vector<int> realizer;  // subset I with osc(A e_I) == value; empty for n == 1
};

/// Matrix seminorm induced by the oscillation: the worst oscillation of A x
/// over inputs with unit oscillation. A 0/1-valued input attains it, so the
/// exact value is the maximum of osc(A e_I) over subsets I; complementary
/// subsets give equal values, which halves the scan. Gray-code order keeps
/// the update per subset linear.
template <class S>
SeminormResult<S> seminorm_with_realizer(const StochasticMatrix<S>& a) {
  const int n = a.size();
  if (n > kMaxEnumerationNodes)
    throw CapabilityError(
        "seminorm enumeration limited to " + std::to_string(kMaxEnumerationNodes) +
        " nodes; ergodicity_coefficients(...).lambda is a cheap upper bound");
  if (n == 1) return {};

  // y = A e_I, starting from I = {0}; scan all subsets containing node 0.
  std::vector<S> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = a(i, 0);
  std::uint32_t mask = 1;
  S best = osc(y);
  std::uint32_t best_mask = mask;

  const std::uint32_t steps = 1u << (n - 1);
  for (std::uint32_t s = 1; s < steps; ++s) {
    const int flip = std::countr_zero(s) + 1;
    const bool add = !(mask & (1u << flip));
    for (int i = 0; i < n; ++i) {
      if (add)
        y[static_cast<std::size_t>(i)] += a(i, flip);
      else
        y[static_cast<std::size_t>(i)] -= a(i, flip);
    }
    mask ^= 1u << flip;
    S v = osc(y);
    if (best < v) {
      best = std::move(v);
      best_mask = mask;
    }
  }

  SeminormResult<S> result;
  result.value = std::move(best);
  for (int i = 0; i < n; ++i)
    if (best_mask & (1u << i)) result.realizer.push_back(i);
  return result;
}

template <class S>
S seminorm(const StochasticMatrix<S>& a) {
  return seminorm_with_realizer(a).value;
}

template <class S>
struct ErgodicityCoefficients {
  S delta{0};   // largest within-column entry spread
  S lambda{0};  // 1 - min over row pairs of the overlap sum
};

/// The classical companions of the seminorm: delta(A) <= ||A|| <= lambda(A),
/// and lambda(A) == 1 exactly when the seminorm is 1.
template <class S>
ErgodicityCoefficients<S> ergodicity_coefficients(const StochasticMatrix<S>& a) {
  const int n = a.size();
  ErgodicityCoefficients<S> c;
  for (int j = 0; j < n; ++j) {
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = i1 + 1; i2 < n; ++i2) {
        S diff = abs_value(a(i2, j) - a(i1, j));
        if (c.delta < diff) c.delta = std::move(diff);
      }
  }
  bool first = true;
  S min_overlap(0);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = i1 + 1; i2 < n; ++i2) {
      S overlap(0);
      for (int j = 0; j < n; ++j) overlap += std::min(a(i1, j), a(i2, j));
      if (first || overlap < min_overlap) {
        min_overlap = std::move(overlap);
        first = false;
      }
    }
  c.lambda = first ? S(0) : S(1) - min_overlap;  // n == 1: no row pair, lambda 0
  return c;
}

/// 1 minus the sum of the column minima. Upper bound on the seminorm;
/// strictly below 1 as soon as one column is entirely positive.
template <class S>
S column_min_bound(const StochasticMatrix<S>& a) {
  const int n = a.size();
  S total(0);
  for (int j = 0; j < n; ++j) {
    S beta = a(0, j);
    for (int i = 1; i < n; ++i)
      if (a(i, j) < beta) beta = a(i, j);
    total += beta;
  }
  return S(1) - total;
}

/// Communication graph of a matrix: edge (i, j) iff the entry (i, j) is
/// positive, exactly as stored (no thresholding in float mode).
template <class S>
Digraph comm_graph(const StochasticMatrix<S>& a) {
  Digraph g(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (a(i, j) > S(0)) g.add_edge(i, j);
  return g;
}

/// Some power of the matrix is entrywise positive. Decided structurally:
/// the communication graph must be strongly connected and aperiodic (the
/// gcd of its cycle lengths is 1).
template <class S>
bool is_ergodic(const StochasticMatrix<S>& a) {
  Digraph g = comm_graph(a);
  if (!is_strongly_connected(g)) return false;
  const int n = g.size();
  // Distance labels from node 0; every edge closes a pseudo-cycle whose
  // length difference feeds the gcd.
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<int> queue{0};
  dist[0] = 0;
  std::size_t head = 0;
  while (head < queue.size()) {
    int u = queue[head++];
    for (int v : g.out(u)) {
      if (dist[static_cast<std::size_t>(v)] == -1) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  int g_period = 0;
  for (const auto& [u, v] : g.edges()) {
    int diff = dist[static_cast<std::size_t>(u)] + 1 - dist[static_cast<std::size_t>(v)];
    g_period = std::gcd(g_period, std::abs(diff));
  }
  return g_period == 1;
}

/// Product A(t)···A(0) of a chronological sequence [A(0), ..., A(t)]:
/// later matrices multiply on the left, everywhere in this library.
template <class S>
StochasticMatrix<S> chain_product(std::span<const StochasticMatrix<S>> seq) {
  if (seq.empty()) throw DimensionError("product of an empty sequence");
  StochasticMatrix<S> p = seq.front();
  for (std::size_t k = 1; k < seq.size(); ++k) p = seq[k] * p;
  return p;
}

template <class S>
StochasticMatrix<S> chain_product(const std::vector<StochasticMatrix<S>>& seq) {
  return chain_product(std::span<const StochasticMatrix<S>>(seq));
}

template <class S>
struct ConvergenceReport {
  bool converged = false;
  std::optional<int> t_hit;             // first prefix length-1 with seminorm < tol
  S final_seminorm{0};                  // seminorm at t_hit, or of the full product
  std::optional<std::vector<S>> limit_row;
  bool seminorms_nonincreasing = true;  // sub-multiplicativity makes this exact in theory
};

/// Walks the running products of a chronological sequence and reports the
/// first prefix whose seminorm drops below tol. At that point all rows agree
/// within tol, so any row stands in for the limit.
template <class S>
ConvergenceReport<S> convergence_certificate(std::span<const StochasticMatrix<S>> seq, const S& tol) {
  if (!(tol > S(0))) throw ValidationError("tolerance must be positive");
  if (seq.empty()) throw DimensionError("certificate over an empty sequence");
  ConvergenceReport<S> report;
  StochasticMatrix<S> p = seq.front();
  S previous = seminorm(p);
  report.final_seminorm = previous;
  for (std::size_t k = 0;; ++k) {
    const S& current = report.final_seminorm;
    if (previous < current) report.seminorms_nonincreasing = false;
    if (current < tol) {
      report.converged = true;
      report.t_hit = static_cast<int>(k);
      report.limit_row = p.row(0);
      return report;
    }
    previous = current;
    if (k + 1 >= seq.size()) return report;
    p = seq[k + 1] * p;
    report.final_seminorm = seminorm(p);
  }
}

template <class S>
ConvergenceReport<S> convergence_certificate(const std::vector<StochasticMatrix<S>>& seq, const S& tol) {
  return convergence_certificate(std::span<const StochasticMatrix<S>>(seq), tol);
}

template <class S>
struct ContractionScan {
  S max_seminorm{0};
  std::vector<int> witness;  // chronological indices: product = M[w.back()]···M[w.front()]
  bool all_products_ergodic = true;
  std::optional<std::vector<int>> non_ergodic_witness;
  long products_scanned = 0;
};

/// Exhausts every product of n^2+1 matrices drawn from the set and returns
/// the largest seminorm with a witness sequence. When all scanned products
/// are ergodic (a finite-sample proxy for the hypothesis that every finite
/// product is), the maximum is strictly below 1.
template <class S>
ContractionScan<S> wolfowitz_contraction(std::span<const StochasticMatrix<S>> matrices,
                                         long enumeration_cap = 1'000'000) {
  if (matrices.empty()) throw DimensionError("contraction scan over an empty set");
  const int n = matrices.front().size();
  for (const auto& m : matrices)
    if (m.size() != n) throw DimensionError("contraction scan over mismatched dimensions");
  const int length = n * n + 1;
  const double total = std::pow(static_cast<double>(matrices.size()), length);
  if (total > static_cast<double>(enumeration_cap))
    throw CapabilityError("enumeration of " + std::to_string(total) +
                          " products exceeds the cap of " + std::to_string(enumeration_cap));

  ContractionScan<S> scan;
  std::vector<int> choice(static_cast<std::size_t>(length), 0);
  std::vector<StochasticMatrix<S>> partial;  // partial[k] = product of the first k+1 choices
  partial.reserve(static_cast<std::size_t>(length));

  bool first = true;
  while (true) {
    // Extend partial products to the full length.
    while (partial.size() < static_cast<std::size_t>(length)) {
      const auto& m = matrices[static_cast<std::size_t>(choice[partial.size()])];
      partial.push_back(partial.empty() ? m : m * partial.back());
    }
    ++scan.products_scanned;
    S value = seminorm(partial.back());
    if (first || scan.max_seminorm < value) {
      scan.max_seminorm = value;
      scan.witness = choice;
      first = false;
    }
    if (!is_ergodic(partial.back()) && !scan.non_ergodic_witness) {
      scan.all_products_ergodic = false;
      scan.non_ergodic_witness = choice;
    }
    // Advance to the next index tuple, reusing shared prefixes.
    int pos = length - 1;
    while (pos >= 0 && choice[static_cast<std::size_t>(pos)] + 1 ==
                           static_cast<int>(matrices.size())) {
      choice[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++choice[static_cast<std::size_t>(pos)];
    partial.resize(static_cast<std::size_t>(pos));
  }
  return scan;
}

template <class S>
ContractionScan<S> wolfowitz_contraction(const std::vector<StochasticMatrix<S>>& matrices,
                                         long enumeration_cap = 1'000'000) {
  return wolfowitz_contraction(std::span<const StochasticMatrix<S>>(matrices), enumeration_cap);
}

}  // namespace consensus
