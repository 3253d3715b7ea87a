#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "ca/error.hpp"

namespace ca {

using BigInt = boost::multiprecision::cpp_int;
// et_off: plain value semantics so Rational composes with generic code
// (lambdas returning S, std::optional<S>, ...) without expression-template
// surprises.
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::backends::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline Rational rational_from_int(long long n) { return Rational(n); }

inline Rational rational_from_ratio(long long num, long long den) {
  require(den != 0, Errc::invalid_argument, "zero denominator");
  return Rational(num, den);
}

// Exact value of a finite double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
  require(std::isfinite(x), Errc::invalid_argument, "non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rational r(mant);
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// cpp_int reads a leading '0' as an octal prefix; strip it for decimal input.
inline BigInt big_from_digits(std::string_view s) {
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i] == '0') ++i;
  return BigInt(std::string(s.substr(i)));
}

}  // namespace detail

// Accepts "3", "-2", "a/b", "0.25", ".5", "1.5e-3". Returns false on anything else.
inline bool try_parse_rational(std::string_view text, Rational& out) {
  if (text.empty()) return false;
  std::string s(text);
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    pos = 1;
  }
  std::string body = s.substr(pos);
  if (body.empty()) return false;

  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return false;
    BigInt d = detail::big_from_digits(den);
    if (d == 0) return false;
    Rational r(detail::big_from_digits(num), d);
    out = negative ? -r : r;
    return true;
  }

  // decimal, possibly with exponent
  long long exp10 = 0;
  if (auto e = body.find_first_of("eE"); e != std::string::npos) {
    std::string es = body.substr(e + 1);
    body = body.substr(0, e);
    bool eneg = false;
    if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
      eneg = (es[0] == '-');
      es = es.substr(1);
    }
    if (!detail::all_digits(es) || es.size() > 6) return false;
    exp10 = std::stoll(es);
    if (eneg) exp10 = -exp10;
  }

  std::string digits;
  long long frac_digits = 0;
  if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if (ip.empty() && fp.empty()) return false;
    if (!ip.empty() && !detail::all_digits(ip)) return false;
    if (!fp.empty() && !detail::all_digits(fp)) return false;
    digits = ip + fp;
    frac_digits = static_cast<long long>(fp.size());
  } else {
    if (!detail::all_digits(body)) return false;
    digits = body;
  }
  if (digits.empty()) return false;

  Rational r{detail::big_from_digits(digits)};
  long long net = exp10 - frac_digits;
  BigInt pow10 = 1;
  for (long long i = 0; i < std::llabs(net); ++i) pow10 *= 10;
  if (net >= 0) {
    r *= Rational(pow10);
  } else {
    r /= Rational(pow10);
  }
  out = negative ? -r : r;
  return true;
}

inline Rational parse_rational(std::string_view text) {
  Rational r;
  require(try_parse_rational(text, r), Errc::parse_error,
          "not a rational number: '" + std::string(text) + "'");
  return r;
}

// Canonical text: "n" for integers, "n/d" otherwise. Round-trips exactly.
inline std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

}  // namespace ca
