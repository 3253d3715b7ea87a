#pragma once

#include <string>
#include <vector>

#include "ca/scalar.hpp"
#include "ca/support.hpp"

namespace ca {

enum class MetricKind { indicator, numeric_absolute, explicit_matrix };

inline const char* metric_kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::indicator: return "indicator";
    case MetricKind::numeric_absolute: return "absolute";
    case MetricKind::explicit_matrix: return "matrix";
  }
  return "?";
}

// A finite support equipped with a ground metric. Distances are held exactly
// (rationals) regardless of arithmetic mode; callers cast per scalar type.
class MetricSupport {
 public:
  static MetricSupport indicator(Support s) {
    return MetricSupport(std::move(s), MetricKind::indicator, {});
  }

  static MetricSupport numeric_absolute(Support s) {
    require(s.all_numeric(), Errc::not_numeric,
            "absolute-difference metric needs numeric labels");
    return MetricSupport(std::move(s), MetricKind::numeric_absolute, {});
  }

  static MetricSupport explicit_matrix(Support s, std::vector<std::vector<Rational>> d) {
    const std::size_t n = s.size();
    require(d.size() == n, Errc::invalid_argument, "metric matrix row count != support size");
    std::vector<Rational> flat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      require(d[i].size() == n, Errc::invalid_argument, "metric matrix is not square");
      for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = d[i][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      require(flat[i * n + i] == 0, Errc::invalid_argument, "metric has nonzero diagonal");
      for (std::size_t j = i + 1; j < n; ++j) {
        require(flat[i * n + j] == flat[j * n + i], Errc::invalid_argument,
                "metric is not symmetric");
        require(flat[i * n + j] > 0, Errc::invalid_argument,
                "metric has nonpositive off-diagonal entry");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          require(flat[i * n + j] <= flat[i * n + k] + flat[k * n + j], Errc::invalid_argument,
                  "metric violates the triangle inequality");
    return MetricSupport(std::move(s), MetricKind::explicit_matrix, std::move(flat));
  }

  const Support& support() const { return support_; }
  MetricKind kind() const { return kind_; }

  Rational distance_exact(std::size_t i, std::size_t j) const {
    if (i == j) return Rational(0);
    switch (kind_) {
      case MetricKind::indicator: return Rational(1);
      case MetricKind::numeric_absolute: {
        Rational d = support_.at(i).value() - support_.at(j).value();
        return d < 0 ? Rational(-d) : d;
      }
      case MetricKind::explicit_matrix: return matrix_[i * support_.size() + j];
    }
    return Rational(0);
  }

  template <class S>
  S distance(std::size_t i, std::size_t j) const {
    return num_traits<S>::from_rational(distance_exact(i, j));
  }

  Rational max_distance() const {
    Rational m(0);
    for (std::size_t i = 0; i < support_.size(); ++i)
      for (std::size_t j = i + 1; j < support_.size(); ++j)
        m = max_val(m, distance_exact(i, j));
    return m;
  }

  // Same metric over rescaled numeric labels (labels multiplied by c > 0).
  MetricSupport scaled_labels(const Rational& c) const {
    require(kind_ == MetricKind::numeric_absolute, Errc::not_numeric,
            "label scaling applies to the absolute-difference metric");
    require(c > 0, Errc::invalid_argument, "scale factor must be positive");
    std::vector<Label> labels;
    labels.reserve(support_.size());
    for (const auto& l : support_.labels()) labels.push_back(Label::number(l.value() * c));
    return numeric_absolute(Support::of(std::move(labels)));
  }

 private:
  MetricSupport(Support s, MetricKind k, std::vector<Rational> m)
      : support_(std::move(s)), kind_(k), matrix_(std::move(m)) {}

  Support support_;
  MetricKind kind_;
  std::vector<Rational> matrix_;  // flat n*n, explicit_matrix only
};

}  // namespace ca
