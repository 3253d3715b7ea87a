#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ca/distances.hpp"
#include "ca/joint.hpp"

namespace ca {

// The ratio rule passes when its statistic is large; every other test passes
// when its statistic is small.
enum class TestDirection { at_most, at_least };

template <class S>
struct TestReport {
  std::string test;
  std::vector<std::pair<std::string, S>> slices;
  S statistic{0};
  S threshold{0};
  TestDirection direction = TestDirection::at_most;
  bool pass = false;
  S margin{0};  // signed slack, >= 0 on pass (up to float tolerance)
  std::vector<std::string> notes;

  void finish() {
    if (direction == TestDirection::at_most) {
      margin = threshold - statistic;
      pass = statistic <= threshold + num_traits<S>::report_tol();
    } else {
      margin = statistic - threshold;
      pass = statistic + num_traits<S>::report_tol() >= threshold;
    }
  }
};

template <class S>
TestReport<S> demographic_parity(const JointDistribution<S>& dist, const S& tau) {
  require(!(tau < S(0)), Errc::invalid_argument, "negative threshold");
  TestReport<S> r;
  r.test = "demographic_parity";
  r.statistic = tv_distance(dist.given_z(Var::Yp, 0), dist.given_z(Var::Yp, 1));
  r.threshold = tau;
  r.finish();
  return r;
}

namespace detail {

// Shared by equalized odds (slice on Yo, compare Yp) and predictive parity
// (slice on Yp, compare Yo): max TV over slices present in both groups.
template <class S>
TestReport<S> sliced_parity(const JointDistribution<S>& dist, Var slice_var, Var compare_var,
                            const char* name, const S& tau) {
  require(!(tau < S(0)), Errc::invalid_argument, "negative threshold");
  TestReport<S> r;
  r.test = name;
  r.threshold = tau;
  const Support& slices = dist.support(slice_var);
  bool any = false;
  for (const auto& label : slices.labels()) {
    bool in0 = dist.prob({{slice_var, label}, {Var::Z, Label::number(0)}}) > S(0);
    bool in1 = dist.prob({{slice_var, label}, {Var::Z, Label::number(1)}}) > S(0);
    if (!in0 || !in1) {
      if (in0 || in1)
        r.notes.push_back("slice " + std::string(var_name(slice_var)) + "=" + label.str() +
                          " has mass in only one group; skipped");
      continue;
    }
    S d = tv_distance(
        dist.condition(compare_var, {{slice_var, label}, {Var::Z, Label::number(0)}}),
        dist.condition(compare_var, {{slice_var, label}, {Var::Z, Label::number(1)}}));
    r.slices.emplace_back(label.str(), d);
    if (!any || r.statistic < d) r.statistic = d;
    any = true;
  }
  require(any, Errc::no_comparable_slice,
          std::string("no ") + var_name(slice_var) + " value has mass in both groups");
  r.finish();
  return r;
}

}  // namespace detail

template <class S>
TestReport<S> equalized_odds(const JointDistribution<S>& dist, const S& tau) {
  return detail::sliced_parity(dist, Var::Yo, Var::Yp, "equalized_odds", tau);
}

template <class S>
TestReport<S> predictive_parity(const JointDistribution<S>& dist, const S& tau) {
  return detail::sliced_parity(dist, Var::Yp, Var::Yo, "predictive_parity", tau);
}

template <class S>
TestReport<S> alpha_disparity(const JointDistribution<S>& dist, const S& alpha, const S& tau) {
  require(!(alpha < S(0)) && !(S(1) < alpha), Errc::invalid_argument, "alpha must be in [0,1]");
  TestReport<S> r;
  r.test = "alpha_disparity";
  S out = tv_distance(dist.given_z(Var::Yp, 0), dist.given_z(Var::Yp, 1));
  S obs = tv_distance(dist.given_z(Var::Yo, 0), dist.given_z(Var::Yo, 1));
  r.slices.emplace_back("output_disparity", out);
  r.slices.emplace_back("observed_disparity", obs);
  r.slices.emplace_back("alpha", alpha);
  r.statistic = out - alpha * obs;
  r.threshold = tau;
  r.finish();
  return r;
}

template <class S>
TestReport<S> misclassification_parity(const JointDistribution<S>& dist, const S& tau) {
  require(dist.has_construct(), Errc::construct_unavailable,
          "misclassification parity needs a construct variable");
  TestReport<S> r;
  r.test = "misclassification_parity";
  S wrong0 = S(1) - dist.agreement_given_z(0);
  S wrong1 = S(1) - dist.agreement_given_z(1);
  r.slices.emplace_back("misclassification_rate_z0", wrong0);
  r.slices.emplace_back("misclassification_rate_z1", wrong1);
  r.statistic = abs_val<S>(wrong0 - wrong1);
  r.threshold = tau;
  r.finish();
  return r;
}

// Generalized four-fifths rule: min ratio of favorable rates must reach p.
template <class S>
TestReport<S> p_percent_rule(const JointDistribution<S>& dist, const Label& favorable,
                             const S& p) {
  require(p > S(0) && !(S(1) < p), Errc::invalid_argument, "p must be in (0,1]");
  require(dist.support(Var::Yp).contains(favorable), Errc::unknown_label,
          "favorable label '" + favorable.str() + "' not in the prediction support");
  TestReport<S> r;
  r.test = "p_percent_rule";
  r.direction = TestDirection::at_least;
  r.threshold = p;
  S rate0 = dist.given_z(Var::Yp, 0).prob_of(favorable);
  S rate1 = dist.given_z(Var::Yp, 1).prob_of(favorable);
  r.slices.emplace_back("favorable_rate_z0", rate0);
  r.slices.emplace_back("favorable_rate_z1", rate1);
  bool zero0 = !(rate0 > S(0)), zero1 = !(rate1 > S(0));
  require(!(zero0 && zero1), Errc::zero_rate, "neither group receives the favorable label");
  if (zero0 || zero1) {
    r.statistic = S(0);
    r.notes.push_back("group z=" + std::string(zero0 ? "0" : "1") +
                      " never receives the favorable label");
  } else {
    r.statistic = min_val(rate0 / rate1, rate1 / rate0);
  }
  r.finish();
  return r;
}

}  // namespace ca
