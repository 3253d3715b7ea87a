#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ca/distances.hpp"
#include "ca/empirical_tests.hpp"
#include "ca/joint.hpp"
#include "ca/random.hpp"
#include "ca/transport.hpp"

namespace ca {

// Assumption about how the construct space relates to the observed space.
template <class S>
struct Worldview {
  enum class Tag { wae, wysiwyg, alpha_hybrid };

  Tag tag = Tag::wae;
  S alpha{0};  // alpha_hybrid only

  static Worldview WAE() { return {Tag::wae, S(0)}; }
  static Worldview WYSIWYG() { return {Tag::wysiwyg, S(0)}; }
  static Worldview AlphaHybrid(S alpha) {
    require(!(alpha < S(0)) && !(S(1) < alpha), Errc::invalid_argument, "alpha must be in [0,1]");
    return {Tag::alpha_hybrid, std::move(alpha)};
  }

  std::string name() const {
    switch (tag) {
      case Tag::wae: return "WAE";
      case Tag::wysiwyg: return "WYSIWYG";
      case Tag::alpha_hybrid: return "alpha-hybrid(" + num_traits<S>::str(alpha) + ")";
    }
    return "?";
  }
};

// Outcome of a discrimination criterion: the model-side quantity `left`
// against the construct-side budget `right`.
template <class S>
struct CriterionReport {
  std::string criterion;
  S left{0};
  S right{0};
  bool amplification = false;
  std::vector<std::pair<std::string, S>> components;
  std::vector<std::pair<std::string, S>> likelihood;  // general criterion only
  std::vector<std::string> notes;

  void finish() { amplification = left > right + num_traits<S>::report_tol(); }
};

template <class S>
S output_disparity(const JointDistribution<S>& dist) {
  return tv_distance(dist.given_z(Var::Yp, 0), dist.given_z(Var::Yp, 1));
}

template <class S>
S construct_disparity(const JointDistribution<S>& dist) {
  require(dist.has_construct(), Errc::construct_unavailable,
          "construct disparity needs a construct variable");
  return tv_distance(dist.given_z(Var::Yc, 0), dist.given_z(Var::Yc, 1));
}

template <class S>
S observed_disparity(const JointDistribution<S>& dist) {
  return tv_distance(dist.given_z(Var::Yo, 0), dist.given_z(Var::Yo, 1));
}

template <class S>
CriterionReport<S> disparity_amplification_categorical(const JointDistribution<S>& dist) {
  CriterionReport<S> r;
  r.criterion = "disparity_amplification_categorical";
  r.left = output_disparity(dist);
  r.right = construct_disparity(dist);
  r.components.emplace_back("output_disparity", r.left);
  r.components.emplace_back("construct_disparity", r.right);
  r.finish();
  return r;
}

namespace detail {

template <class S>
void require_binary_prediction(const JointDistribution<S>& dist) {
  require(dist.support(Var::Yp) == Support::binary01(), Errc::non_binary_prediction,
          "this criterion needs Yp over {0,1}, got " + dist.support(Var::Yp).str());
}

// l(yc) = Pr[Yp=1 | Yc=yc]; undefined (nullopt) at zero-mass labels.
template <class S>
std::vector<std::optional<S>> likelihood_function(const JointDistribution<S>& dist,
                                                  std::vector<std::string>* notes) {
  require_binary_prediction(dist);
  require(dist.has_construct(), Errc::construct_unavailable,
          "likelihood function needs a construct variable");
  const Support& yc = dist.support(Var::Yc);
  std::vector<S> mass(yc.size(), S(0)), hit(yc.size(), S(0));
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
    (void)z;
    (void)o;
    mass[c] += m;
    if (dist.support(Var::Yp).at(p) == Label::number(1)) hit[c] += m;
  });
  std::vector<std::optional<S>> ell(yc.size());
  for (std::size_t c = 0; c < yc.size(); ++c) {
    if (mass[c] > S(0)) {
      ell[c] = hit[c] / mass[c];
    } else if (notes) {
      notes->push_back("construct label " + yc.at(c).str() +
                       " has zero mass; dropped from the likelihood domain");
    }
  }
  return ell;
}

}  // namespace detail

// Stronger criterion: output disparity against rho* times the construct
// earthmover distance. Requires binary predictions.
template <class S>
CriterionReport<S> disparity_amplification_general(const JointDistribution<S>& dist,
                                                   const MetricSupport& ms) {
  require(ms.support() == dist.support(Var::Yc), Errc::metric_mismatch,
          "metric support must equal the construct support");
  CriterionReport<S> r;
  r.criterion = "disparity_amplification_general";
  auto ell = detail::likelihood_function(dist, &r.notes);
  S rho = lipschitz_constant(ell, ms);
  auto plan = emd(dist.given_z(Var::Yc, 0), dist.given_z(Var::Yc, 1), ms);
  r.left = output_disparity(dist);
  r.right = rho * plan.cost;
  r.components.emplace_back("output_disparity", r.left);
  r.components.emplace_back("rho_star", rho);
  r.components.emplace_back("construct_emd", plan.cost);
  for (std::size_t c = 0; c < ell.size(); ++c)
    if (ell[c]) r.likelihood.emplace_back(ms.support().at(c).str(), *ell[c]);
  r.finish();
  return r;
}

// Group-balanced probability that the prediction matches the construct.
template <class S>
S construct_accuracy(const JointDistribution<S>& dist) {
  require(dist.has_construct(), Errc::construct_unavailable,
          "construct accuracy needs a construct variable");
  const Support& yc = dist.support(Var::Yc);
  const Support& yp = dist.support(Var::Yp);
  bool overlap = false;
  for (const auto& l : yc.labels())
    if (yp.contains(l)) {
      overlap = true;
      break;
    }
  require(overlap, Errc::support_mismatch,
          "construct and prediction supports share no label");
  return (dist.agreement_given_z(0) + dist.agreement_given_z(1)) / S(2);
}

template <class S>
struct WorldviewReport {
  Worldview<S> worldview;
  bool holds = false;
  S statistic{0};  // deviation from the worldview's defining identity
  S threshold{0};
  std::vector<std::pair<std::string, S>> components;
};

template <class S>
WorldviewReport<S> worldview_holds(const JointDistribution<S>& dist, const Worldview<S>& wv,
                                   const S& tau) {
  require(!(tau < S(0)), Errc::invalid_argument, "negative tolerance");
  require(dist.has_construct(), Errc::construct_unavailable,
          "worldview check needs a construct variable");
  WorldviewReport<S> r;
  r.worldview = wv;
  r.threshold = tau;
  switch (wv.tag) {
    case Worldview<S>::Tag::wae: {
      r.statistic = construct_disparity(dist);
      r.components.emplace_back("construct_disparity", r.statistic);
      break;
    }
    case Worldview<S>::Tag::wysiwyg: {
      S agree(0);
      dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
        (void)z;
        (void)p;
        if (dist.support(Var::Yc).at(c) == dist.support(Var::Yo).at(o)) agree += m;
      });
      r.statistic = S(1) - agree;
      r.components.emplace_back("construct_equals_observed", agree);
      break;
    }
    case Worldview<S>::Tag::alpha_hybrid: {
      S cons = construct_disparity(dist);
      S obs = observed_disparity(dist);
      r.statistic = abs_val<S>(cons - wv.alpha * obs);
      r.components.emplace_back("construct_disparity", cons);
      r.components.emplace_back("observed_disparity", obs);
      break;
    }
  }
  r.holds = r.statistic <= tau + num_traits<S>::report_tol();
  return r;
}

namespace detail {

// Two group margins whose total variation distance is exactly `target`:
// random margins are mixed toward their average, and TV is linear in the
// mixing weight. Falls back to point masses when the random draw is too
// close together to stretch.
template <class S>
std::pair<Distribution<S>, Distribution<S>> margins_with_exact_tv(const Support& support,
                                                                  const S& target,
                                                                  std::uint64_t seed) {
  require(!(target < S(0)) && !(S(1) < target), Errc::infeasible_target,
          "target distance must be in [0,1]");
  if (support.size() == 1) {
    require(!(target > S(0)), Errc::infeasible_target,
            "single-label support cannot carry positive disparity");
    auto point = Distribution<S>::point_mass(support, support.at(0));
    return {point, point};
  }
  std::vector<S> a, b;
  S base_tv(0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    SeedStream rng(derive_seed(seed, 0xa11a + attempt));
    a = random_simplex<S>(support.size(), rng);
    b = random_simplex<S>(support.size(), rng);
    base_tv = S(0);
    for (std::size_t i = 0; i < a.size(); ++i) base_tv += abs_val<S>(a[i] - b[i]);
    base_tv /= S(2);
    if (!(base_tv < target)) break;
  }
  if (base_tv < target) {
    a.assign(support.size(), S(0));
    b.assign(support.size(), S(0));
    a[0] = S(1);
    b[1] = S(1);
    base_tv = S(1);
  }
  if (!(base_tv > S(0))) {  // degenerate draw with target 0
    auto d = Distribution<S>(support, a);
    return {d, d};
  }
  S w = target / base_tv;
  std::vector<S> ma(a.size()), mb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    S avg = (a[i] + b[i]) / S(2);
    ma[i] = w * a[i] + (S(1) - w) * avg;
    mb[i] = w * b[i] + (S(1) - w) * avg;
  }
  return {Distribution<S>(support, std::move(ma)), Distribution<S>(support, std::move(mb))};
}

// Replaces the construct margin of `dist` per group, keeping the (Z, Yo, Yp)
// marginal intact; Yc is conditionally independent of (Yo, Yp) given Z.
template <class S>
JointDistribution<S> replace_construct(const JointDistribution<S>& dist,
                                       const Distribution<S>& margin0,
                                       const Distribution<S>& margin1) {
  const Support& yc = margin0.support();
  const Support& yo = dist.support(Var::Yo);
  const Support& yp = dist.support(Var::Yp);
  std::vector<S> base3(2 * yo.size() * yp.size(), S(0));
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
    (void)c;
    base3[(static_cast<std::size_t>(z) * yo.size() + o) * yp.size() + p] += m;
  });
  return JointDistribution<S>::from_cells(
      yc, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        const S& m = base3[(static_cast<std::size_t>(z) * yo.size() + o) * yp.size() + p];
        return m * (z == 0 ? margin0[c] : margin1[c]);
      });
}

}  // namespace detail

// Attaches a construct variable consistent with the worldview. The observed,
// prediction, and group marginals of `dist` are preserved exactly.
template <class S>
JointDistribution<S> impose_worldview(const JointDistribution<S>& dist, const Worldview<S>& wv,
                                      std::uint64_t seed,
                                      const std::optional<Support>& yc_support = std::nullopt) {
  switch (wv.tag) {
    case Worldview<S>::Tag::wae: {
      Support yc = yc_support.value_or(dist.support(Var::Yo));
      auto margin = random_distribution<S>(yc, derive_seed(seed, 0x3ae));
      return detail::replace_construct(dist, margin, margin);
    }
    case Worldview<S>::Tag::wysiwyg: {
      const Support& yo = dist.support(Var::Yo);
      const Support& yp = dist.support(Var::Yp);
      std::vector<S> base3(2 * yo.size() * yp.size(), S(0));
      dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
        (void)c;
        base3[(static_cast<std::size_t>(z) * yo.size() + o) * yp.size() + p] += m;
      });
      return JointDistribution<S>::from_cells(
          yo, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
            if (c != o) return S(0);
            return base3[(static_cast<std::size_t>(z) * yo.size() + o) * yp.size() + p];
          });
    }
    case Worldview<S>::Tag::alpha_hybrid: {
      Support yc = yc_support.value_or(dist.support(Var::Yo));
      S target = wv.alpha * observed_disparity(dist);
      auto [m0, m1] = detail::margins_with_exact_tv<S>(yc, target, derive_seed(seed, 0xa1fa));
      return detail::replace_construct(dist, m0, m1);
    }
  }
  fail(Errc::invalid_argument, "bad worldview");
}

// Ceiling on construct accuracy for any model passing demographic parity.
template <class S>
S max_accuracy_under_dem_parity(const JointDistribution<S>& dist) {
  return S(1) - construct_disparity(dist) / S(2);
}

// Ceiling on construct accuracy when the alpha-hybrid worldview holds with
// `alpha` but the model only passes the weaker alpha_prime-disparity test.
template <class S>
S max_accuracy_under_alpha_disparity(const JointDistribution<S>& dist, const S& alpha,
                                     const S& alpha_prime) {
  require(alpha_prime < alpha, Errc::wrong_order,
          "bound requires alpha > alpha_prime");
  return S(1) - (alpha - alpha_prime) * observed_disparity(dist) / S(2);
}

// Replaces Yc with the likelihood value l(yc) on a numeric support, making
// the recomputed likelihood the identity (rho* = 1 unless constant).
template <class S>
JointDistribution<S> transform_construct(const JointDistribution<S>& dist) {
  auto ell = detail::likelihood_function(dist, nullptr);
  const Support& yc = dist.support(Var::Yc);
  std::vector<Label> values;
  for (std::size_t c = 0; c < yc.size(); ++c) {
    if (!ell[c]) continue;
    Label l = Label::number(num_traits<S>::to_rational(*ell[c]));
    bool dup = false;
    for (const auto& v : values) dup = dup || v == l;
    if (!dup) values.push_back(l);
  }
  Support transformed = Support::of(std::move(values));
  std::vector<std::size_t> remap(yc.size(), 0);
  for (std::size_t c = 0; c < yc.size(); ++c)
    if (ell[c])
      remap[c] = transformed.require_index(Label::number(num_traits<S>::to_rational(*ell[c])));

  const Support& yo = dist.support(Var::Yo);
  const Support& yp = dist.support(Var::Yp);
  std::vector<S> cells(2 * transformed.size() * yo.size() * yp.size(), S(0));
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& m) {
    cells[((static_cast<std::size_t>(z) * transformed.size() + remap[c]) * yo.size() + o) *
              yp.size() + p] += m;
  });
  return JointDistribution<S>(transformed, yo, yp, std::move(cells));
}

}  // namespace ca
