#include "consensus/delays.hpp"

#include <algorithm>

#include "consensus/errors.hpp"

namespace consensus {

std::string DelayViolation::describe() const {
  std::string head = "tau[" + std::to_string(t) + "][" + std::to_string(i) + "][" +
                     std::to_string(j) + "] = " + std::to_string(tau);
  switch (rule) {
    case Rule::causality:
      return head + " looks into the future (limit " + std::to_string(t) + ")";
    case Rule::self_access:
      return head + " must equal " + std::to_string(t) + " on the diagonal";
    case Rule::bound:
      return head + " is staler than the delay bound allows";
  }
  return head;
}

DelaySchedule::DelaySchedule(int n, int delta, std::vector<std::vector<std::vector<int>>> tau)
    : n_(n), delta_(delta), tau_(std::move(tau)) {
  if (n_ < 1) throw ValidationError("delay schedule needs at least one agent");
  if (delta_ < 1) throw ValidationError("delay bound must be a positive integer");
  for (const auto& slice : tau_) {
    if (static_cast<int>(slice.size()) != n_)
      throw DimensionError("delay slice row count does not match agent count");
    for (const auto& row : slice)
      if (static_cast<int>(row.size()) != n_)
        throw DimensionError("delay slice column count does not match agent count");
  }
}

DelaySchedule DelaySchedule::zero(int n, int delta, int horizon) {
  std::vector<std::vector<std::vector<int>>> tau(
      static_cast<std::size_t>(horizon),
      std::vector<std::vector<int>>(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), 0)));
  for (int t = 0; t < horizon; ++t)
    for (auto& row : tau[static_cast<std::size_t>(t)]) std::fill(row.begin(), row.end(), t);
  return DelaySchedule(n, delta, std::move(tau));
}

DelaySchedule DelaySchedule::stalest(int n, int delta, int horizon) {
  std::vector<std::vector<std::vector<int>>> tau(
      static_cast<std::size_t>(horizon),
      std::vector<std::vector<int>>(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), 0)));
  for (int t = 0; t < horizon; ++t) {
    int oldest = std::max(0, t - delta + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        tau[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (i == j) ? t : oldest;
  }
  return DelaySchedule(n, delta, std::move(tau));
}

std::vector<DelayViolation> DelaySchedule::validate_slice(int t) const {
  std::vector<DelayViolation> out;
  const auto& slice = tau_[static_cast<std::size_t>(t)];
  const int oldest = std::max(0, t - delta_ + 1);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const int v = slice[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v > t) out.push_back({DelayViolation::Rule::causality, t, i, j, v});
      if (i == j && v != t) out.push_back({DelayViolation::Rule::self_access, t, i, j, v});
      if (v < oldest) out.push_back({DelayViolation::Rule::bound, t, i, j, v});
    }
  return out;
}

std::vector<DelayViolation> DelaySchedule::validate() const {
  std::vector<DelayViolation> out;
  for (int t = 0; t < horizon(); ++t) {
    auto slice = validate_slice(t);
    out.insert(out.end(), slice.begin(), slice.end());
  }
  return out;
}

void DelaySchedule::require_valid() const {
  auto violations = validate();
  if (violations.empty()) return;
  std::string msg = "invalid delay schedule: " + violations.front().describe();
  if (violations.size() > 1)
    msg += " (+" + std::to_string(violations.size() - 1) + " more)";
  throw ValidationError(msg);
}

}  // namespace consensus
