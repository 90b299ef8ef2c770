#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace consensus {

/// Arbitrary-precision rational number. Thin value wrapper around GMP's
/// mpq_class that keeps every result canonicalized and adds the "p/q"
/// text form used by the JSON and CSV formats.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(int v) : v_(v) {}                 // NOLINT(google-explicit-constructor)
  Rat(long v) : v_(v) {}                // NOLINT(google-explicit-constructor)
  Rat(long num, long den);
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Accepts "p/q", plain integers, and decimal literals ("0.25" == 1/4).
  static Rat parse(std::string_view text);

  /// Canonical text form: "p" for integers, "p/q" otherwise.
  std::string str() const;

  double to_double() const { return v_.get_d(); }
  bool is_integer() const { return v_.get_den() == 1; }

  const mpq_class& raw() const { return v_; }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  Rat operator-() const { return Rat(mpq_class(-v_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend Rat abs(const Rat& a) { return Rat(mpq_class(::abs(a.v_))); }
  friend std::ostream& operator<<(std::ostream& os, const Rat& a);

 private:
  mpq_class v_;
};

/// a^e for a non-negative integer exponent.
Rat pow(const Rat& base, unsigned exp);

}  // namespace consensus
