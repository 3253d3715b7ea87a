#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ca/rational.hpp"

namespace ca {

// The two arithmetic modes share one code path: every probability computation
// is templated on the scalar S, which is either double (float mode, tolerance
// driven) or Rational (exact mode, zero tolerances).
template <class S>
struct num_traits;

template <>
struct num_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";

  static double from_int(long long n) { return static_cast<double>(n); }
  static double from_ratio(long long num, long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rational(const Rational& r) { return ca::to_double(r); }
  static Rational to_rational(double x) { return rational_from_double(x); }
  static double to_double(double x) { return x; }
  static double parse(const std::string& text) { return ca::to_double(parse_rational(text)); }

  static std::string str(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }

  // |sum - 1| slack on probability tables and marginal identities.
  static double mass_tol() { return 1e-12; }
  // slack on solver optimality certificates and theorem assertions.
  static double solver_tol() { return 1e-9; }
  // slack on pass/fail and amplification comparisons.
  static double report_tol() { return 1e-12; }
};

template <>
struct num_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "rational";

  static Rational from_int(long long n) { return Rational(n); }
  static Rational from_ratio(long long num, long long den) {
    return rational_from_ratio(num, den);
  }
  static Rational from_rational(const Rational& r) { return r; }
  static Rational to_rational(const Rational& r) { return r; }
  static double to_double(const Rational& r) { return ca::to_double(r); }
  static Rational parse(const std::string& text) { return parse_rational(text); }
  static std::string str(const Rational& r) { return rational_to_string(r); }

  static Rational mass_tol() { return Rational(0); }
  static Rational solver_tol() { return Rational(0); }
  static Rational report_tol() { return Rational(0); }
};

template <class S>
inline S abs_val(const S& x) {
  return x < S(0) ? S(-x) : x;
}

template <class S>
inline const S& min_val(const S& a, const S& b) {
  return b < a ? b : a;
}

template <class S>
inline const S& max_val(const S& a, const S& b) {
  return a < b ? b : a;
}

}  // namespace ca
