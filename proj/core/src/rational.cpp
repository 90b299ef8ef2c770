#include "consensus/rational.hpp"

#include <cctype>
#include <ostream>

#include "consensus/errors.hpp"

namespace consensus {

Rat::Rat(long num, long den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) throw ValidationError("rational division by zero");
  v_ /= o.v_;
  return *this;
}

namespace {

bool is_plain_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty rational literal");
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_plain_integer(num) || !is_plain_integer(den))
      throw ValidationError("bad rational literal: '" + s + "'");
    mpq_class v(s, 10);
    if (v.get_den() == 0) throw ValidationError("zero denominator in '" + s + "'");
    v.canonicalize();
    return Rat(std::move(v));
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!is_plain_integer(whole) || (!frac.empty() && !is_plain_integer(frac)))
      throw ValidationError("bad decimal literal: '" + s + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class whole_z(whole, 10);
    mpz_class frac_z = frac.empty() ? mpz_class(0) : mpz_class(frac, 10);
    bool negative = !whole.empty() && whole[0] == '-';
    mpz_class num = whole_z * scale + (negative ? -frac_z : frac_z);
    mpq_class v(num, scale);
    v.canonicalize();
    return Rat(std::move(v));
  }
  if (!is_plain_integer(s)) throw ValidationError("bad rational literal: '" + s + "'");
  return Rat(mpq_class(s, 10));
}

std::string Rat::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& a) { return os << a.str(); }

Rat pow(const Rat& base, unsigned exp) {
  Rat acc(1);
  Rat b = base;
  while (exp > 0) {
    if (exp & 1u) acc *= b;
    b *= b;
    exp >>= 1u;
  }
  return acc;
}

}  // namespace consensus
