#pragma once

#include <string>
#include <vector>

namespace consensus {

/// One broken delay-table entry, with the rule it breaks.
struct DelayViolation {
  enum class Rule {
    causality,    // tau_ij(t) > t
    self_access,  // tau_ii(t) != t
    bound,        // tau_ij(t) < max(0, t - delta + 1)
  };
  Rule rule;
  int t, i, j, tau;
  std::string describe() const;
};

/// Table of send times tau_ij(t): the value agent i uses from agent j at
/// step t was emitted at time tau_ij(t). Valid tables never look into the
/// future, give every agent immediate access to its own value, and look
/// back at most delta-1 steps. Nothing forces them to be monotone,
/// injective, or surjective, so non-FIFO, duplicating and lossy channels
/// are all expressible.
class DelaySchedule {
 public:
  DelaySchedule(int n, int delta, std::vector<std::vector<std::vector<int>>> tau);

  static DelaySchedule zero(int n, int delta, int horizon);     // tau = t everywhere
  static DelaySchedule stalest(int n, int delta, int horizon);  // maximal staleness off-diagonal

  int n() const { return n_; }
  int delta() const { return delta_; }
  int horizon() const { return static_cast<int>(tau_.size()); }
  int tau(int t, int i, int j) const {
    return tau_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const std::vector<std::vector<std::vector<int>>>& table() const { return tau_; }

  /// Every rule violation in the table; empty exactly when the table is valid.
  std::vector<DelayViolation> validate() const;
  std::vector<DelayViolation> validate_slice(int t) const;
  void require_valid() const;  // throws ValidationError listing the first violations

  bool operator==(const DelaySchedule& other) const = default;

 private:
  int n_;
  int delta_;
  std::vector<std::vector<std::vector<int>>> tau_;  // [t][i][j]
};

}  // namespace consensus
