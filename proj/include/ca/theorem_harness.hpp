#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ca/constructions.hpp"
#include "ca/io.hpp"

namespace ca {

// Outcome of one randomized suite. Wall time stays out of the serialized
// form so reports are byte-stable for a given seed.
struct SuiteReport {
  std::string theorem;
  std::string title;
  int trials = 0;
  int failures = 0;
  std::string first_counterexample;  // JSON text, empty when clean
  double wall_ms = 0.0;
  std::vector<std::string> notes;
};

inline Json suite_report_json(const SuiteReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["title"] = r.title;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["first_counterexample"] =
      r.first_counterexample.empty() ? Json(nullptr) : Json::parse(r.first_counterexample);
  j["notes"] = r.notes;
  return j;
}

namespace harness {

// Conclusions are asserted exactly in rational mode, within 1e-9 in float.
template <class S>
S theorem_tol() {
  return num_traits<S>::solver_tol();
}

template <class S>
struct Trial {
  std::uint64_t seed;
  int index;
  bool ok = true;
  std::string reason;
  std::optional<JointDistribution<S>> witness;

  std::uint64_t sub(std::uint64_t salt) const { return derive_seed(seed, salt); }

  void check(bool cond, const std::string& what, const JointDistribution<S>* dist = nullptr) {
    if (!ok || cond) return;
    ok = false;
    reason = what;
    if (dist) witness = *dist;
  }

  void check_le(const S& a, const S& b, const std::string& what,
                const JointDistribution<S>* dist = nullptr) {
    check(a <= b + theorem_tol<S>(), what + " (" + num_traits<S>::str(a) + " <= " +
                                         num_traits<S>::str(b) + ")", dist);
  }

  void check_eq(const S& a, const S& b, const std::string& what,
                const JointDistribution<S>* dist = nullptr) {
    check(abs_val<S>(a - b) <= theorem_tol<S>(), what + " (" + num_traits<S>::str(a) +
                                                     " != " + num_traits<S>::str(b) + ")",
          dist);
  }

  std::string counterexample(const std::string& id) const {
    Json j;
    j["theorem"] = id;
    j["trial"] = index;
    j["seed"] = std::to_string(seed);
    j["reason"] = reason;
    j["distribution"] = witness ? joint_to_json(*witness) : Json(nullptr);
    return j.dump();
  }
};

template <class S, class Fn>
SuiteReport run_trials(const std::string& id, const std::string& title, int trials,
                       std::uint64_t seed, Fn&& body) {
  require(trials >= 1, Errc::invalid_argument, "trials must be >= 1");
  SuiteReport rep;
  rep.theorem = id;
  rep.title = title;
  rep.trials = trials;
  auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < trials; ++t) {
    Trial<S> trial{derive_seed(seed, 0x7157 + 1000003ULL * static_cast<std::uint64_t>(t)), t};
    body(trial);
    if (!trial.ok) {
      rep.failures++;
      if (rep.first_counterexample.empty()) rep.first_counterexample = trial.counterexample(id);
    }
  }
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---- samplers ----

inline Support index_support(std::size_t n) {
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(Label::number(static_cast<long long>(i)));
  return Support::of(std::move(labels));
}

inline Support unit_support() { return index_support(1); }

// n distinct rational points drawn on a quarter-integer grid.
inline Support random_numeric_support(std::size_t n, std::uint64_t seed) {
  SeedStream rng(seed);
  std::vector<Label> labels;
  std::vector<std::uint64_t> used;
  while (labels.size() < n) {
    std::uint64_t k = rng.below(64);
    bool dup = false;
    for (auto u : used) dup = dup || u == k;
    if (dup) continue;
    used.push_back(k);
    labels.push_back(Label::number(Rational(static_cast<long long>(k), 4)));
  }
  return Support::of(std::move(labels));
}

template <class S>
S dyadic(SeedStream& rng, long long num_choices, long long den) {
  return num_traits<S>::from_ratio(static_cast<long long>(rng.below(num_choices)), den);
}

// Kernel whose output margin equals one shared random target in both groups:
// random rows, then each group's mixture is corrected convexly toward the
// target, which is exact in rational arithmetic.
template <class S>
ModelKernel<S> dem_parity_kernel(const Distribution<S>& yo_margin0,
                                 const Distribution<S>& yo_margin1, const Support& yp,
                                 std::uint64_t seed) {
  SeedStream rng(seed);
  const Support& yo = yo_margin0.support();
  std::vector<S> target = random_simplex<S>(yp.size(), rng);
  ModelKernel<S> kernel(yo, yp);
  for (int z = 0; z < 2; ++z) {
    const Distribution<S>& margin = (z == 0 ? yo_margin0 : yo_margin1);
    std::vector<std::vector<S>> rows(yo.size());
    std::vector<S> mix(yp.size(), S(0));
    for (std::size_t i = 0; i < yo.size(); ++i) {
      rows[i] = random_simplex<S>(yp.size(), rng);
      for (std::size_t j = 0; j < yp.size(); ++j) mix[j] += margin[i] * rows[i][j];
    }
    S wmax(1);
    for (std::size_t j = 0; j < yp.size(); ++j)
      if (mix[j] > S(0)) wmax = min_val(wmax, target[j] / mix[j]);
    S w = wmax * num_traits<S>::from_ratio(1 + static_cast<long long>(rng.below(15)), 16);
    std::vector<S> correction(yp.size());
    for (std::size_t j = 0; j < yp.size(); ++j)
      correction[j] = (target[j] - w * mix[j]) / (S(1) - w);
    for (std::size_t i = 0; i < yo.size(); ++i) {
      std::vector<S> row(yp.size());
      for (std::size_t j = 0; j < yp.size(); ++j)
        row[j] = w * rows[i][j] + (S(1) - w) * correction[j];
      kernel.set_row(z, yo.at(i), Distribution<S>(yp, std::move(row)));
    }
  }
  return kernel;
}

// Rows depend on the observed value only, so equalized odds holds exactly.
template <class S>
ModelKernel<S> eq_odds_kernel(const Support& yo, const Support& yp, std::uint64_t seed) {
  SeedStream rng(seed);
  ModelKernel<S> kernel(yo, yp);
  for (const auto& l : yo.labels())
    kernel.set_shared_row(l, Distribution<S>(yp, random_simplex<S>(yp.size(), rng)));
  return kernel;
}

// The construct-optimal model: Yp copies Yc.
template <class S>
JointDistribution<S> optimal_model_joint(const JointDistribution<S>& dist) {
  const Support& yc = dist.support(Var::Yc);
  const Support& yo = dist.support(Var::Yo);
  std::vector<S> base3(2 * yc.size() * yo.size(), S(0));
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
    (void)p;
    base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o] += m;
  });
  return JointDistribution<S>::from_cells(
      yc, yo, yc, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        if (p != c) return S(0);
        return base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o];
      });
}

// Yp independent of (Yc, Yo) given Z, with the given per-group margins.
template <class S>
JointDistribution<S> replace_prediction(const JointDistribution<S>& dist,
                                        const Distribution<S>& margin0,
                                        const Distribution<S>& margin1) {
  const Support& yc = dist.support(Var::Yc);
  const Support& yo = dist.support(Var::Yo);
  const Support& yp = margin0.support();
  std::vector<S> base3(2 * yc.size() * yo.size(), S(0));
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
    (void)p;
    base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o] += m;
  });
  return JointDistribution<S>::from_cells(
      yc, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        return base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o] *
               (z == 0 ? margin0[p] : margin1[p]);
      });
}

// Equal-sized groups; Yo independent of (Yc, Yp) given Z; per group, (Yc, Yp)
// is maximally coupled, which maximizes accuracy for the given margins.
template <class S>
JointDistribution<S> coupled_model_joint(const Distribution<S>& c0, const Distribution<S>& c1,
                                         const Distribution<S>& m0, const Distribution<S>& m1,
                                         const Distribution<S>& v0, const Distribution<S>& v1) {
  const Support& yc = c0.support();
  const Support& yo = m0.support();
  auto g0 = maximal_coupling(c0, v0);
  auto g1 = maximal_coupling(c1, v1);
  std::vector<S> gamma(2 * yc.size() * yc.size(), S(0));
  for (const auto& [u, v, m] : g0.mass) gamma[u * yc.size() + v] += m;
  for (const auto& [u, v, m] : g1.mass)
    gamma[yc.size() * yc.size() + u * yc.size() + v] += m;
  return JointDistribution<S>::from_cells(
      yc, yo, yc, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        const auto& margin = (z == 0 ? m0 : m1);
        return margin[o] * gamma[static_cast<std::size_t>(z) * yc.size() * yc.size() +
                                 c * yc.size() + p] / S(2);
      });
}

// Base over (Yc, Z) with the observed variable mirroring the construct and a
// trivial prediction, ready for apply_model or the optimal-model builders.
template <class S>
JointDistribution<S> construct_base(const Distribution<S>& c0, const Distribution<S>& c1,
                                    const S& z1_mass) {
  const Support& yc = c0.support();
  return JointDistribution<S>::from_cells(
      yc, yc, unit_support(), [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        (void)p;
        if (c != o) return S(0);
        return z == 0 ? (S(1) - z1_mass) * c0[c] : z1_mass * c1[c];
      });
}

inline MetricSupport random_metric(const Support& support, std::uint64_t seed) {
  SeedStream rng(seed);
  switch (rng.below(support.all_numeric() ? 3 : 2)) {
    case 0:
      return MetricSupport::indicator(support);
    case 2:
      return MetricSupport::numeric_absolute(support);
    default: {
      // random positive symmetric matrix, then its shortest-path closure
      const std::size_t n = support.size();
      std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          d[i][j] = d[j][i] = Rational(1 + static_cast<long long>(rng.below(16)), 8);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (i != j && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      return MetricSupport::explicit_matrix(support, std::move(d));
    }
  }
}

// ---- suites ----

template <class S>
SuiteReport suite_t1(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T1", "demographic parity precludes disparity amplification; under WAE every optimal model passes it",
      trials, seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yc = index_support(2 + rng.below(2));
        Support yo = index_support(2 + rng.below(2));
        Support yp = index_support(2 + rng.below(2));
        auto base = random_joint<S>(yc, yo, unit_support(), t.sub(1));
        auto kernel = dem_parity_kernel<S>(base.given_z(Var::Yo, 0), base.given_z(Var::Yo, 1),
                                           yp, t.sub(2));
        auto joint = apply_model(base, kernel);
        t.check(demographic_parity(joint, S(0)).pass, "premise: demographic parity", &joint);
        auto rep = disparity_amplification_categorical(joint);
        t.check_le(rep.left, rep.right, "no disparity amplification", &joint);

        auto wae = impose_worldview(base, Worldview<S>::WAE(), t.sub(3));
        auto opt = optimal_model_joint(wae);
        t.check_eq(construct_accuracy(opt), S(1), "optimal model is construct optimal", &opt);
        t.check(demographic_parity(opt, S(0)).pass,
                "optimal model passes demographic parity under WAE", &opt);
      });
}

template <class S>
SuiteReport suite_t2(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T2", "demographic parity caps construct accuracy at 1 - tv/2; the coupled model attains it",
      trials, seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yc = index_support(2 + rng.below(3));
        auto c0 = random_distribution<S>(yc, t.sub(1));
        auto c1 = random_distribution<S>(yc, t.sub(2));
        S z1 = num_traits<S>::from_ratio(1 + static_cast<long long>(rng.below(15)), 16);
        auto base = construct_base(c0, c1, z1);
        S bound = max_accuracy_under_dem_parity(base);

        auto built = optimal_dem_parity_model(base);
        t.check(demographic_parity(built.joint, S(0)).pass,
                "constructed model passes demographic parity", &built.joint);
        t.check_eq(construct_accuracy(built.joint), bound, "constructed model attains the bound",
                   &built.joint);

        for (std::uint64_t k = 0; k < 3; ++k) {
          auto kernel = dem_parity_kernel<S>(base.given_z(Var::Yo, 0), base.given_z(Var::Yo, 1),
                                             yc, t.sub(10 + k));
          auto joint = apply_model(base, kernel);
          t.check(demographic_parity(joint, S(0)).pass, "sampled model passes demographic parity",
                  &joint);
          t.check_le(construct_accuracy(joint), bound, "sampled model respects the bound", &joint);
        }
      });
}

template <class S>
SuiteReport suite_l1(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "L1", "sum of pointwise minima equals one minus the total variation distance", trials, seed,
      [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        // overlapping but not necessarily equal supports
        std::size_t n = 1 + rng.below(5), m = 1 + rng.below(5);
        std::size_t shift = rng.below(3);
        std::vector<Label> la, lb;
        for (std::size_t i = 0; i < n; ++i) la.push_back(Label::number(static_cast<long long>(i)));
        for (std::size_t i = 0; i < m; ++i)
          lb.push_back(Label::number(static_cast<long long>(i + shift)));
        auto p = random_distribution<S>(Support::of(la), t.sub(1));
        auto q = random_distribution<S>(Support::of(lb), t.sub(2));
        Support all = p.support().united(q.support());
        S sum_min(0);
        for (const auto& l : all.labels()) sum_min += min_val(p.prob_of(l), q.prob_of(l));
        t.check_eq(sum_min, S(1) - tv_distance(p, q), "sum of minima identity");
      });
}

template <class S>
SuiteReport suite_t3(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T3", "under WYSIWYG, equalized odds precludes disparity amplification; optimal models pass it",
      trials, seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yo = index_support(2 + rng.below(2));
        Support yp = index_support(2 + rng.below(2));
        auto base = random_joint<S>(unit_support(), yo, unit_support(), t.sub(1));
        auto wys = impose_worldview(base, Worldview<S>::WYSIWYG(), t.sub(2));
        auto joint = apply_model(wys, eq_odds_kernel<S>(yo, yp, t.sub(3)));
        t.check(worldview_holds(joint, Worldview<S>::WYSIWYG(), S(0)).holds, "premise: WYSIWYG",
                &joint);
        t.check(equalized_odds(joint, S(0)).pass, "premise: equalized odds", &joint);
        auto rep = disparity_amplification_categorical(joint);
        t.check_le(rep.left, rep.right, "no disparity amplification", &joint);

        auto opt = optimal_model_joint(wys);
        t.check(equalized_odds(opt, S(0)).pass, "optimal model passes equalized odds", &opt);
        t.check_eq(construct_accuracy(opt), S(1), "optimal model is construct optimal", &opt);
      });
}

template <class S>
SuiteReport suite_t4(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T4", "without WYSIWYG, an equalized-odds model can amplify disparity", trials, seed,
      [](Trial<S>& t) {
        auto ce = eqodds_amplifying_counterexample<S>(t.seed);
        t.check(equalized_odds(ce, S(0)).pass, "counterexample passes equalized odds", &ce);
        t.check(output_disparity(ce) > num_traits<S>::from_ratio(1, 10),
                "output disparity clears the generator floor", &ce);
        t.check_eq(construct_disparity(ce), S(0), "construct attached independently of Z", &ce);
        t.check(disparity_amplification_categorical(ce).amplification,
                "counterexample amplifies disparity", &ce);
        t.check(!worldview_holds(ce, Worldview<S>::WYSIWYG(), S(0)).holds,
                "WYSIWYG fails on the counterexample", &ce);
        t.check(eqodds_amplifying_counterexample<S>(t.seed) == ce, "generator is deterministic");
      });
}

template <class S>
SuiteReport suite_t5(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T5", "a predictive-parity model can reach output disparity 1 - epsilon", trials, seed,
      [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yo = index_support(2 + rng.below(2));
        auto m0 = random_distribution<S>(yo, t.sub(1));
        auto m1 = random_distribution<S>(yo, t.sub(2));
        S eps = num_traits<S>::from_ratio(1, 8LL << rng.below(4));
        std::optional<AdversarialModel<S>> adv;
        for (int shrink = 0; shrink < 60 && !adv; ++shrink) {
          try {
            adv = pp_adversarial_model(m0, m1, eps);
          } catch (const AuditError& e) {
            if (e.code() != Errc::epsilon_too_large) throw;
            eps /= S(2);
          }
        }
        t.check(adv.has_value(), "an admissible epsilon exists");
        if (!adv) return;
        t.check(predictive_parity(adv->joint, S(0)).pass, "model passes predictive parity",
                &adv->joint);
        t.check_eq(output_disparity(adv->joint), S(1) - eps, "output disparity equals 1 - epsilon",
                   &adv->joint);
        for (int z = 0; z < 2; ++z)
          for (int yp = 0; yp < 2; ++yp) {
            auto post = adv->joint.condition(
                Var::Yo, {{Var::Yp, Label::number(yp)}, {Var::Z, Label::number(z)}});
            for (std::size_t i = 0; i < yo.size(); ++i)
              t.check_eq(post[i], adv->posteriors[i][static_cast<std::size_t>(yp)],
                         "posterior matches the solved linear system", &adv->joint);
          }
      });
}

template <class S>
SuiteReport suite_t6(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T6",
      "under the alpha-hybrid worldview, the alpha-disparity test precludes amplification; "
      "optimal models pass it",
      trials, seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        S alpha = dyadic<S>(rng, 17, 16);  // 0 .. 1
        Support yo = index_support(2 + rng.below(2));
        Support yp = index_support(2 + rng.below(2));
        auto base = random_joint<S>(unit_support(), yo, unit_support(), t.sub(1));
        auto wv = Worldview<S>::AlphaHybrid(alpha);
        auto hyb = impose_worldview(base, wv, t.sub(2));
        t.check(worldview_holds(hyb, wv, S(0)).holds, "premise: alpha-hybrid worldview", &hyb);

        S budget = alpha * observed_disparity(hyb);
        S u = dyadic<S>(rng, 9, 8);  // 0 .. 1
        auto [v0, v1] = detail::margins_with_exact_tv<S>(yp, budget * u, t.sub(3));
        auto joint = replace_prediction(hyb, v0, v1);
        t.check(alpha_disparity(joint, alpha, S(0)).pass, "premise: alpha-disparity test", &joint);
        auto rep = disparity_amplification_categorical(joint);
        t.check_le(rep.left, rep.right, "no disparity amplification", &joint);

        auto opt = optimal_model_joint(hyb);
        t.check(alpha_disparity(opt, alpha, S(0)).pass,
                "optimal model passes the alpha-disparity test", &opt);
      });
}

template <class S>
SuiteReport suite_t7(int trials, std::uint64_t seed, int kernels_per_instance = 500) {
  return run_trials<S>(
      "T7", "passing a smaller alpha'-disparity test caps accuracy at 1 - (alpha-alpha')tv/2",
      trials, seed, [kernels_per_instance](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        long long a_num = 1 + static_cast<long long>(rng.below(16));   // alpha = a/16, 1/16..1
        long long ap_num = static_cast<long long>(rng.below(a_num));   // alpha' < alpha
        S alpha = num_traits<S>::from_ratio(a_num, 16);
        S alpha_p = num_traits<S>::from_ratio(ap_num, 16);

        Support yo = index_support(2 + rng.below(2));
        S tv_obs = num_traits<S>::from_ratio(4 + static_cast<long long>(rng.below(9)), 16);
        auto [m0, m1] = detail::margins_with_exact_tv<S>(yo, tv_obs, t.sub(1));
        Support yc = index_support(2 + rng.below(2));
        auto [c0, c1] = detail::margins_with_exact_tv<S>(yc, alpha * tv_obs, t.sub(2));

        S bound = S(1) - (alpha - alpha_p) * tv_obs / S(2);
        std::optional<Distribution<S>> first_v0, first_v1;
        S first_acc(0);
        for (int k = 0; k < kernels_per_instance; ++k) {
          SeedStream krng(t.sub(100 + static_cast<std::uint64_t>(k)));
          S u = dyadic<S>(krng, 9, 8);
          auto [v0, v1] =
              detail::margins_with_exact_tv<S>(yc, alpha_p * tv_obs * u, krng.fork(1));
          // per-group maximal couplings give the largest accuracy for these margins
          S acc = S(1) - (tv_distance(c0, v0) + tv_distance(c1, v1)) / S(2);
          t.check_le(acc, bound, "accuracy bound");
          if (k == 0) {
            first_v0 = v0;
            first_v1 = v1;
            first_acc = acc;
          }
        }
        // soundness: materialize the first sampled model and audit it
        auto joint = coupled_model_joint(c0, c1, m0, m1, *first_v0, *first_v1);
        auto wv = Worldview<S>::AlphaHybrid(alpha);
        t.check(worldview_holds(joint, wv, S(0)).holds, "premise: alpha-hybrid worldview", &joint);
        t.check(alpha_disparity(joint, alpha_p, S(0)).pass, "premise: alpha'-disparity test",
                &joint);
        t.check_eq(construct_accuracy(joint), first_acc, "coupled model attains the margin bound",
                   &joint);
        t.check_eq(max_accuracy_under_alpha_disparity(joint, alpha, alpha_p), bound,
                   "bound operation agrees with the formula", &joint);
      });
}

template <class S>
SuiteReport suite_t8(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T8", "passing a larger alpha'-disparity test can amplify disparity", trials, seed,
      [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        long long a_num = static_cast<long long>(rng.below(16));  // alpha = a/16, 0..15/16
        long long ap_num = a_num + 1 + static_cast<long long>(rng.below(16 - a_num));
        S alpha = num_traits<S>::from_ratio(a_num, 16);
        S alpha_p = num_traits<S>::from_ratio(ap_num, 16);
        auto ce = alpha_counterexample<S>(alpha, alpha_p, t.seed);
        t.check(worldview_holds(ce, Worldview<S>::AlphaHybrid(alpha), S(0)).holds,
                "alpha-hybrid worldview holds", &ce);
        t.check(alpha_disparity(ce, alpha_p, S(0)).pass, "alpha'-disparity test passes", &ce);
        t.check(disparity_amplification_categorical(ce).amplification,
                "counterexample amplifies disparity", &ce);
        t.check(alpha_counterexample<S>(alpha, alpha_p, t.seed) == ce,
                "generator is deterministic");
      });
}

template <class S>
SuiteReport suite_t9(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T9", "categorical amplification implies general amplification under the indicator metric",
      trials, seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yc = index_support(2 + rng.below(3));
        Support yo = index_support(2);
        auto ms = MetricSupport::indicator(yc);
        bool found = false;
        for (std::uint64_t attempt = 0; attempt < 200 && !found; ++attempt) {
          auto joint = random_joint<S>(yc, yo, Support::binary01(), t.sub(1 + attempt));
          auto cat = disparity_amplification_categorical(joint);
          auto gen = disparity_amplification_general(joint, ms);
          t.check_le(gen.right, cat.right, "rho* x EMD is dominated by the TV budget", &joint);
          if (cat.amplification) {
            found = true;
            t.check(gen.left > gen.right - theorem_tol<S>(),
                    "categorical amplification carries over to the general criterion", &joint);
          }
        }
        t.check(found, "sampler produced an amplifying instance");
      });
}

template <class S>
SuiteReport suite_t10(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T10", "demographic parity precludes general disparity amplification", trials, seed,
      [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yc = random_numeric_support(2 + rng.below(3), t.sub(1));
        Support yo = index_support(2 + rng.below(2));
        auto base = random_joint<S>(yc, yo, unit_support(), t.sub(2));
        auto kernel = dem_parity_kernel<S>(base.given_z(Var::Yo, 0), base.given_z(Var::Yo, 1),
                                           Support::binary01(), t.sub(3));
        auto joint = apply_model(base, kernel);
        t.check(demographic_parity(joint, S(0)).pass, "premise: demographic parity", &joint);
        auto gen = disparity_amplification_general(joint, random_metric(yc, t.sub(4)));
        t.check_le(gen.left, gen.right, "no general disparity amplification", &joint);
      });
}

template <class S>
SuiteReport suite_t11(int trials, std::uint64_t seed) {
  return run_trials<S>(
      "T11", "under WYSIWYG, equalized odds precludes general disparity amplification", trials,
      seed, [](Trial<S>& t) {
        SeedStream rng(t.sub(0));
        Support yo = random_numeric_support(2 + rng.below(3), t.sub(1));
        auto base = random_joint<S>(unit_support(), yo, unit_support(), t.sub(2));
        auto wys = impose_worldview(base, Worldview<S>::WYSIWYG(), t.sub(3));
        auto joint = apply_model(wys, eq_odds_kernel<S>(yo, Support::binary01(), t.sub(4)));
        t.check(worldview_holds(joint, Worldview<S>::WYSIWYG(), S(0)).holds, "premise: WYSIWYG",
                &joint);
        t.check(equalized_odds(joint, S(0)).pass, "premise: equalized odds", &joint);

        auto ms = rng.below(2) == 0 ? MetricSupport::numeric_absolute(yo)
                                    : random_metric(yo, t.sub(5));
        auto gen = disparity_amplification_general(joint, ms);
        t.check_le(gen.left, gen.right, "no general disparity amplification", &joint);

        // the duality step: ell / rho* is 1-Lipschitz and lower-bounds the EMD
        S rho(0), cost(0);
        for (const auto& [k, v] : gen.components) {
          if (k == "rho_star") rho = v;
          if (k == "construct_emd") cost = v;
        }
        if (rho > S(0) && gen.likelihood.size() == yo.size()) {
          std::vector<S> phi;
          for (const auto& l : yo.labels()) {
            for (const auto& [name, value] : gen.likelihood)
              if (name == l.str()) phi.push_back(value / rho);
          }
          S lower = kantorovich_dual_bound(joint.given_z(Var::Yc, 0), joint.given_z(Var::Yc, 1),
                                           ms, phi);
          t.check_le(lower, cost, "dual bound stays below the EMD", &joint);
        }
      });
}

// Worldview-by-test outcome matrix, one randomized property per cell.
template <class S>
SuiteReport suite_table(int trials, std::uint64_t seed) {
  SuiteReport rep;
  rep.theorem = "TBL";
  rep.title = "worldview-by-test outcome matrix";
  auto t0 = std::chrono::steady_clock::now();

  auto merge = [&rep](const SuiteReport& cell, const std::string& label,
                      const std::string& outcome) {
    rep.trials += cell.trials;
    rep.failures += cell.failures;
    if (rep.first_counterexample.empty()) rep.first_counterexample = cell.first_counterexample;
    rep.notes.push_back(label + ": " + (cell.failures == 0 ? outcome : "FAILED") + " [" +
                        std::to_string(cell.trials) + " trials]");
  };

  // demographic parity / WAE: motivated
  merge(run_trials<S>("TBL.dp_wae", "", trials, derive_seed(seed, 1), [](Trial<S>& t) {
          SeedStream rng(t.sub(0));
          Support yc = index_support(2 + rng.below(2));
          Support yo = index_support(2 + rng.below(2));
          auto base = random_joint<S>(yc, yo, unit_support(), t.sub(1));
          // the no-amplification half holds under any construct attachment
          switch (rng.below(3)) {
            case 0: base = impose_worldview(base, Worldview<S>::WAE(), t.sub(2)); break;
            case 1: base = impose_worldview(base, Worldview<S>::WYSIWYG(), t.sub(2)); break;
            default: {
              SeedStream arng(t.sub(3));
              base = impose_worldview(
                  base, Worldview<S>::AlphaHybrid(dyadic<S>(arng, 17, 16)), t.sub(2));
              break;
            }
          }
          auto kernel = dem_parity_kernel<S>(base.given_z(Var::Yo, 0), base.given_z(Var::Yo, 1),
                                             index_support(2), t.sub(4));
          auto joint = apply_model(base, kernel);
          t.check(demographic_parity(joint, S(0)).pass, "premise: demographic parity", &joint);
          auto rep2 = disparity_amplification_categorical(joint);
          t.check_le(rep2.left, rep2.right, "no amplification under any worldview", &joint);

          auto wae = impose_worldview(base, Worldview<S>::WAE(), t.sub(5));
          t.check_eq(max_accuracy_under_dem_parity(wae), S(1),
                     "under WAE the accuracy ceiling is 1", &wae);
          auto built = optimal_dem_parity_model(wae);
          t.check(demographic_parity(built.joint, S(0)).pass,
                  "constructed model passes demographic parity", &built.joint);
          t.check_eq(construct_accuracy(built.joint), S(1), "the ceiling is attained", &built.joint);
        }),
        "demographic parity / WAE", "motivated");

  // demographic parity / WYSIWYG: necessarily suboptimal
  merge(run_trials<S>("TBL.dp_wysiwyg", "", trials, derive_seed(seed, 2), [](Trial<S>& t) {
          SeedStream rng(t.sub(0));
          Support yo = index_support(2 + rng.below(2));
          S tv_obs = num_traits<S>::from_ratio(4 + static_cast<long long>(rng.below(9)), 16);
          auto [m0, m1] = detail::margins_with_exact_tv<S>(yo, tv_obs, t.sub(1));
          auto base = replace_prediction(
              construct_base(m0, m1, num_traits<S>::from_ratio(1, 2)),
              Distribution<S>::point_mass(unit_support(), Label::number(0)),
              Distribution<S>::point_mass(unit_support(), Label::number(0)));
          auto wys = impose_worldview(base, Worldview<S>::WYSIWYG(), t.sub(2));
          S bound = max_accuracy_under_dem_parity(wys);
          t.check(bound < S(1), "positive observed disparity forces a ceiling below 1", &wys);
          auto built = optimal_dem_parity_model(wys);
          t.check(demographic_parity(built.joint, S(0)).pass,
                  "constructed model passes demographic parity", &built.joint);
          t.check_eq(construct_accuracy(built.joint), bound, "ceiling attained", &built.joint);
          auto kernel = dem_parity_kernel<S>(wys.given_z(Var::Yo, 0), wys.given_z(Var::Yo, 1),
                                             yo, t.sub(3));
          auto joint = apply_model(wys, kernel);
          t.check(demographic_parity(joint, S(0)).pass, "sampled model passes demographic parity",
                  &joint);
          t.check_le(construct_accuracy(joint), bound, "sampled model respects the ceiling",
                     &joint);
        }),
        "demographic parity / WYSIWYG", "necessarily suboptimal");

  // equalized odds / WAE: amplification allowed
  merge(run_trials<S>("TBL.eo_wae", "", trials, derive_seed(seed, 3), [](Trial<S>& t) {
          auto ce = eqodds_amplifying_counterexample<S>(t.seed);
          t.check(worldview_holds(ce, Worldview<S>::WAE(), S(0)).holds, "WAE holds", &ce);
          t.check(equalized_odds(ce, S(0)).pass, "equalized odds passes", &ce);
          t.check(disparity_amplification_categorical(ce).amplification, "yet disparity amplifies",
                  &ce);
        }),
        "equalized odds / WAE", "amplification allowed");

  // equalized odds / WYSIWYG: motivated
  merge(run_trials<S>("TBL.eo_wysiwyg", "", trials, derive_seed(seed, 4), [](Trial<S>& t) {
          SeedStream rng(t.sub(0));
          Support yo = index_support(2 + rng.below(2));
          Support yp = index_support(2 + rng.below(2));
          auto base = random_joint<S>(unit_support(), yo, unit_support(), t.sub(1));
          auto wys = impose_worldview(base, Worldview<S>::WYSIWYG(), t.sub(2));
          auto joint = apply_model(wys, eq_odds_kernel<S>(yo, yp, t.sub(3)));
          t.check(worldview_holds(joint, Worldview<S>::WYSIWYG(), S(0)).holds, "premise: WYSIWYG",
                  &joint);
          t.check(equalized_odds(joint, S(0)).pass, "premise: equalized odds", &joint);
          auto rep2 = disparity_amplification_categorical(joint);
          t.check_le(rep2.left, rep2.right, "no amplification", &joint);
          auto opt = optimal_model_joint(wys);
          t.check(equalized_odds(opt, S(0)).pass, "optimal model passes equalized odds", &opt);
        }),
        "equalized odds / WYSIWYG", "motivated");

  // predictive parity / either worldview: amplification allowed
  merge(run_trials<S>("TBL.pp", "", trials, derive_seed(seed, 5), [](Trial<S>& t) {
          SeedStream rng(t.sub(0));
          Support yo = index_support(2 + rng.below(2));
          Distribution<S> m0, m1;
          for (std::uint64_t a = 0;; ++a) {
            m0 = random_distribution<S>(yo, t.sub(10 + a));
            m1 = random_distribution<S>(yo, t.sub(1000 + a));
            if (!(tv_distance(m0, m1) > num_traits<S>::from_ratio(1, 2))) break;
          }
          S eps = num_traits<S>::from_ratio(1, 16LL << rng.below(3));
          std::optional<AdversarialModel<S>> adv;
          for (int shrink = 0; shrink < 60 && !adv; ++shrink) {
            try {
              adv = pp_adversarial_model(m0, m1, eps);
            } catch (const AuditError& e) {
              if (e.code() != Errc::epsilon_too_large) throw;
              eps /= S(2);
            }
          }
          t.check(adv.has_value(), "an admissible epsilon exists");
          if (!adv) return;
          t.check_eq(output_disparity(adv->joint), S(1) - eps,
                     "output disparity equals 1 - epsilon", &adv->joint);
          for (int w = 0; w < 2; ++w) {
            auto wv = (w == 0) ? Worldview<S>::WAE() : Worldview<S>::WYSIWYG();
            auto attached = impose_worldview(adv->joint, wv, t.sub(20 + w));
            t.check(worldview_holds(attached, wv, S(0)).holds, "worldview attached exactly",
                    &attached);
            t.check(predictive_parity(attached, S(0)).pass, "predictive parity still passes",
                    &attached);
            t.check(disparity_amplification_categorical(attached).amplification,
                    "yet disparity amplifies", &attached);
          }
        }),
        "predictive parity / any worldview", "amplification allowed");

  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace harness

struct TheoremInfo {
  const char* id;
  const char* summary;
};

inline const std::vector<TheoremInfo>& theorem_catalogue() {
  static const std::vector<TheoremInfo> catalogue = {
      {"T1", "demographic parity precludes disparity amplification"},
      {"T2", "accuracy ceiling under demographic parity"},
      {"L1", "pointwise-minimum identity for total variation"},
      {"T3", "equalized odds under WYSIWYG precludes amplification"},
      {"T4", "equalized odds without WYSIWYG can amplify"},
      {"T5", "predictive parity admits near-maximal output disparity"},
      {"T6", "alpha-disparity test under the alpha-hybrid worldview"},
      {"T7", "accuracy ceiling under a too-small alpha'"},
      {"T8", "amplification under a too-large alpha'"},
      {"T9", "categorical amplification implies general amplification"},
      {"T10", "demographic parity under the general criterion"},
      {"T11", "equalized odds under WYSIWYG, general criterion"},
      {"TBL", "worldview-by-test outcome matrix"},
  };
  return catalogue;
}

template <class S>
SuiteReport run_suite(const std::string& theorem_id, int trials, std::uint64_t seed) {
  if (theorem_id == "T1") return harness::suite_t1<S>(trials, seed);
  if (theorem_id == "T2") return harness::suite_t2<S>(trials, seed);
  if (theorem_id == "L1") return harness::suite_l1<S>(trials, seed);
  if (theorem_id == "T3") return harness::suite_t3<S>(trials, seed);
  if (theorem_id == "T4") return harness::suite_t4<S>(trials, seed);
  if (theorem_id == "T5") return harness::suite_t5<S>(trials, seed);
  if (theorem_id == "T6") return harness::suite_t6<S>(trials, seed);
  if (theorem_id == "T7") return harness::suite_t7<S>(trials, seed);
  if (theorem_id == "T8") return harness::suite_t8<S>(trials, seed);
  if (theorem_id == "T9") return harness::suite_t9<S>(trials, seed);
  if (theorem_id == "T10") return harness::suite_t10<S>(trials, seed);
  if (theorem_id == "T11") return harness::suite_t11<S>(trials, seed);
  if (theorem_id == "TBL") return harness::suite_table<S>(trials, seed);
  fail(Errc::unknown_theorem, "unknown theorem id '" + theorem_id + "'");
}

template <class S>
std::vector<SuiteReport> run_all(int trials, std::uint64_t seed) {
  std::vector<SuiteReport> out;
  const auto& catalogue = theorem_catalogue();
  for (std::size_t i = 0; i < catalogue.size(); ++i)
    out.push_back(run_suite<S>(catalogue[i].id, trials, derive_seed(seed, 0xca7a + i)));
  return out;
}

}  // namespace ca
