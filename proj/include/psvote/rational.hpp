#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace psvote {

// Exact arithmetic scalar. Constructions rely on exact equalities between
// PS-values (deliberate ties), so the default pipeline is rational; the
// floating pipeline exists for search workloads.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Exact conversion: every finite double is p / 2^k.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite value");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  for (int i = 0; i < 53 && mant != std::floor(mant); ++i) {
    mant *= 2.0;
    --exp;
  }
  Rat r(BigInt(static_cast<long long>(mant)));
  if (exp > 0)
    r *= Rat(BigInt(1) << exp);
  else if (exp < 0)
    r /= Rat(BigInt(1) << (-exp));
  return r;
}

/// Parses "p/q", decimal strings ("0.25", "-3e-2") and plain integers.
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt p(text.substr(0, slash));
    BigInt q(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
    return Rat(p, q);
  }
  if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
      text.find('E') == std::string::npos) {
    return Rat(BigInt(text));
  }
  // Decimal / scientific form: mantissa digits over a power of ten.
  std::string s = text;
  int exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stoi(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  auto dot = s.find('.');
  std::string digits = s;
  int frac_len = 0;
  if (dot != std::string::npos) {
    frac_len = static_cast<int>(s.size() - dot - 1);
    digits = s.substr(0, dot) + s.substr(dot + 1);
  }
  if (digits.empty()) throw std::invalid_argument("parse_rational: bad number '" + text + "'");
  BigInt num(digits);
  if (neg) num = -num;
  Rat r(num);
  int k = exp10 - frac_len;
  BigInt pow10 = 1;
  for (int i = 0; i < std::abs(k); ++i) pow10 *= 10;
  if (k >= 0)
    r *= Rat(pow10);
  else
    r /= Rat(pow10);
  return r;
}

inline std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

inline BigInt lcm_big(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

// Comparison slack per scalar type: exact for Rat, small tolerance for double
// (PS-values computed in floating point may miss deliberate ties otherwise).
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static Rat tie_tolerance() { return Rat(0); }
  static Rat from_rational(const Rat& r) { return r; }
};

template <>
struct scalar_traits<double> {
  static double tie_tolerance() { return 1e-12; }
  static double from_rational(const Rat& r) { return to_double(r); }
};

template <class T>
bool nearly_equal(const T& a, const T& b) {
  T tol = scalar_traits<T>::tie_tolerance();
  return a >= b - tol && a <= b + tol;
}

template <class T>
bool definitely_less(const T& a, const T& b) {
  return a < b - scalar_traits<T>::tie_tolerance();
}

}  // namespace psvote
