#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

#include "consensus/rational.hpp"

namespace consensus {

/// The two entry types a scenario can run with: exact rationals for the
/// inequality checks, binary64 for long simulations. Every float-mode
/// comparison goes through these hooks so its tolerance is stated once.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool is_exact = true;
  static constexpr const char* mode_name = "rational";

  static bool near(const Rat& a, const Rat& b) { return a == b; }
  // Lower bounds asserted by the contraction lemmas; exact mode compares exactly.
  static bool at_least(const Rat& a, const Rat& b) { return a >= b; }
  static double to_double(const Rat& a) { return a.to_double(); }
  static Rat from_parsed(const std::string& text) { return Rat::parse(text); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool is_exact = false;
  static constexpr const char* mode_name = "float";
  // Default tolerance for equality-style checks (row sums, gap comparisons).
  static constexpr double eq_tol = 1e-12;
  // Relative slack for the lemma-level lower bounds; absorbs the rounding of
  // long product chains without hiding genuine violations.
  static constexpr double bound_slack = 1e-9;

  static bool near(double a, double b) { return std::abs(a - b) <= eq_tol; }
  static bool at_least(double a, double b) {
    return a >= b - bound_slack * std::max({std::abs(a), std::abs(b), 1e-300});
  }
  static double to_double(double a) { return a; }
  static double from_parsed(const std::string& text) { return std::stod(text); }
};

template <class S>
concept ScalarMode = std::same_as<S, Rat> || std::same_as<S, double>;

inline double to_double(const Rat& a) { return a.to_double(); }
inline double to_double(double a) { return a; }

inline Rat abs_value(const Rat& v) { return abs(v); }
inline double abs_value(double v) { return std::abs(v); }

}  // namespace consensus
