#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>

#include "ca/rational.hpp"

namespace ca {

// A category label: either an exact rational number or a plain string.
// Numbers order before strings; numbers by value, strings lexicographically.
// Any text that lexes as a number becomes a numeric label, so "1/2", "0.5",
// and a JSON number 0.5 all denote values (the first two exactly).
class Label {
 public:
  Label() : value_(std::string()) {}

  static Label number(Rational v) { return Label(std::move(v)); }
  static Label number(long long v) { return Label(Rational(v)); }
  static Label text(std::string s) { return Label(std::move(s)); }

  static Label parse(std::string_view s) {
    Rational r;
    if (try_parse_rational(s, r)) return Label(std::move(r));
    return Label(std::string(s));
  }

  // Stands in for Yc when a dataset carries no construct column.
  static const Label& construct_placeholder() {
    static const Label l = Label::text("__unobserved__");
    return l;
  }

  bool is_number() const { return std::holds_alternative<Rational>(value_); }
  const Rational& value() const { return std::get<Rational>(value_); }

  // Canonical text; numeric labels render as "n" or "n/d" and re-parse exactly.
  std::string str() const {
    if (is_number()) return rational_to_string(value());
    return std::get<std::string>(value_);
  }

  bool operator==(const Label& o) const { return value_ == o.value_; }

  bool operator<(const Label& o) const {
    if (is_number() != o.is_number()) return is_number();
    if (is_number()) return value() < o.value();
    return std::get<std::string>(value_) < std::get<std::string>(o.value_);
  }

 private:
  explicit Label(Rational v) : value_(std::move(v)) {}
  explicit Label(std::string s) : value_(std::move(s)) {}

  std::variant<Rational, std::string> value_;
};

}  // namespace ca
