#pragma once

#include <array>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ca/criteria.hpp"

namespace ca {

// Joint law over a pair of variables on a shared support whose marginals
// match two given distributions.
template <class S>
struct Coupling {
  Support support;
  std::vector<std::tuple<std::size_t, std::size_t, S>> mass;  // (u, v, weight), weight > 0

  // Pr[u = v]
  S equal_mass() const {
    S acc(0);
    for (const auto& [u, v, m] : mass)
      if (u == v) acc += m;
    return acc;
  }

  S conditional_row_mass(std::size_t u) const {
    S acc(0);
    for (const auto& [a, b, m] : mass)
      if (a == u) acc += m;
    return acc;
  }
};

// Couples p and q so that Pr[u = v] is maximal: the diagonal takes
// min(p, q) pointwise, which sums to 1 - tv(p, q); the surplus is matched
// greedily in canonical label order.
template <class S>
Coupling<S> maximal_coupling(const Distribution<S>& p, const Distribution<S>& q) {
  Support common = p.support().united(q.support());
  const std::size_t n = common.size();
  std::vector<S> sp(n), sq(n);
  Coupling<S> c;
  c.support = common;
  for (std::size_t i = 0; i < n; ++i) {
    S pi = p.prob_of(common.at(i)), qi = q.prob_of(common.at(i));
    S d = min_val(pi, qi);
    if (d > S(0)) c.mass.emplace_back(i, i, d);
    sp[i] = pi - d;
    sq[i] = qi - d;
  }
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    if (!(sp[i] > S(0))) {
      ++i;
      continue;
    }
    if (!(sq[j] > S(0))) {
      ++j;
      continue;
    }
    S m = min_val(sp[i], sq[j]);
    c.mass.emplace_back(i, j, m);
    sp[i] -= m;
    sq[j] -= m;
  }
  return c;
}

template <class S>
struct ConstructedModel {
  ModelKernel<S> kernel;
  JointDistribution<S> joint;
};

// The accuracy-maximizing model under demographic parity: group 0 predicts
// its construct outright; group 1 couples its construct maximally with the
// group-0 construct law, so both output margins agree and the accuracy
// ceiling 1 - tv(Yc|Z=0, Yc|Z=1)/2 is attained. The returned joint mirrors
// the construct into the observed variable so the model is expressible as a
// stochastic classifier over (Yo, Z).
template <class S>
ConstructedModel<S> optimal_dem_parity_model(const JointDistribution<S>& base) {
  require(base.has_construct(), Errc::construct_unavailable,
          "the construction needs construct margins per group");
  const Support& yc = base.support(Var::Yc);
  auto c0 = base.given_z(Var::Yc, 0);
  auto c1 = base.given_z(Var::Yc, 1);

  ModelKernel<S> kernel(yc, yc);
  for (const auto& l : yc.labels()) kernel.set_row(0, l, Distribution<S>::point_mass(yc, l));

  auto coupling = maximal_coupling(c1, c0);  // rows follow Yc|Z=1, columns target Yc|Z=0
  for (std::size_t u = 0; u < yc.size(); ++u) {
    if (c1[u] > S(0)) {
      std::vector<S> row(yc.size(), S(0));
      for (const auto& [a, b, m] : coupling.mass)
        if (a == u) row[b] += m / c1[u];
      kernel.set_row(1, yc.at(u), Distribution<S>(yc, std::move(row)));
    } else {
      kernel.set_row(1, yc.at(u), Distribution<S>::point_mass(yc, yc.at(u)));
    }
  }

  S z1 = base.group_mass(1);
  auto joint = JointDistribution<S>::from_cells(
      yc, yc, yc, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        if (c != o) return S(0);
        const auto& row = kernel.row(z, o);
        S margin = (z == 0 ? (S(1) - z1) * c0[c] : z1 * c1[c]);
        return margin * (*row)[p];
      });
  return {std::move(kernel), std::move(joint)};
}

template <class S>
struct AdversarialModel {
  ModelKernel<S> kernel;
  JointDistribution<S> joint;
  // Pr[Yo = yo | Yp = yp], shared across groups; index [yo][yp in {0,1}]
  std::vector<std::array<S, 2>> posteriors;
};

// Model that nearly announces the group (Yp ~ Z up to epsilon) yet passes
// predictive parity exactly: posteriors are solved from the 2x2 total-
// probability system tying them to the per-group observed margins.
template <class S>
AdversarialModel<S> pp_adversarial_model(const Distribution<S>& yo_margin0,
                                         const Distribution<S>& yo_margin1, const S& epsilon) {
  require(yo_margin0.support() == yo_margin1.support(), Errc::support_mismatch,
          "observed margins must share a support");
  require(epsilon > S(0) && epsilon < S(1), Errc::invalid_argument, "epsilon must be in (0,1)");
  const Support& yo = yo_margin0.support();
  for (std::size_t i = 0; i < yo.size(); ++i)
    require(yo_margin0[i] > S(0) && yo_margin1[i] > S(0), Errc::invalid_argument,
            "observed margins must be positive everywhere");

  const S half_eps = epsilon / S(2);
  const S det = S(1) - epsilon;
  std::vector<std::array<S, 2>> post(yo.size());
  for (std::size_t i = 0; i < yo.size(); ++i) {
    // [m0; m1] = [[1-e/2, e/2], [e/2, 1-e/2]] * [p_yo0; p_yo1]
    post[i][0] = ((S(1) - half_eps) * yo_margin0[i] - half_eps * yo_margin1[i]) / det;
    post[i][1] = ((S(1) - half_eps) * yo_margin1[i] - half_eps * yo_margin0[i]) / det;
    require(post[i][0] > S(0) && post[i][1] > S(0), Errc::epsilon_too_large,
            "epsilon too large: posterior for Yo=" + yo.at(i).str() + " is not positive");
  }

  Support yp = Support::binary01();
  // Pr[Yp = yp | Z = z]: 1 - e/2 when yp == z
  auto yp_rate = [&](int z, std::size_t p) {
    return (static_cast<std::size_t>(z) == p) ? S(1) - half_eps : half_eps;
  };
  ModelKernel<S> kernel(yo, yp);
  for (int z = 0; z < 2; ++z) {
    const auto& margin = (z == 0 ? yo_margin0 : yo_margin1);
    for (std::size_t i = 0; i < yo.size(); ++i) {
      std::vector<S> row(2);
      for (std::size_t p = 0; p < 2; ++p) row[p] = post[i][p] * yp_rate(z, p) / margin[i];
      kernel.set_row(z, yo.at(i), Distribution<S>(yp, std::move(row)));
    }
  }

  Support yc = Support::construct_placeholder();
  auto joint = JointDistribution<S>::from_cells(
      yc, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        (void)c;
        const auto& margin = (z == 0 ? yo_margin0 : yo_margin1);
        const auto& row = kernel.row(z, o);
        return margin[o] * (*row)[p] / S(2);  // equal-sized groups
      });
  return {std::move(kernel), std::move(joint), std::move(post)};
}

// Equalized odds holds by construction (rows depend on Yo only) while the
// construct is attached independently of Z, so any positive output disparity
// is amplification. Draws are retried on forked seeds until the output
// disparity clears 0.1 and the observed disparity clears 0.2.
template <class S>
JointDistribution<S> eqodds_amplifying_counterexample(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t s = derive_seed(seed, 0xe90dd5 + attempt);
    SeedStream rng(s);
    std::size_t n = 2 + rng.below(2);
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(Label::number(static_cast<long long>(i)));
    Support yo = Support::of(labels);
    Support yp = Support::binary01();

    Distribution<S> m0(yo, random_simplex<S>(n, rng));
    Distribution<S> m1(yo, random_simplex<S>(n, rng));
    if (tv_distance(m0, m1) < num_traits<S>::from_ratio(1, 5)) continue;

    std::vector<Distribution<S>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.emplace_back(yp, random_simplex<S>(2, rng));
    S out0(0), out1(0);
    for (std::size_t i = 0; i < n; ++i) {
      out0 += m0[i] * rows[i][1];
      out1 += m1[i] * rows[i][1];
    }
    if (abs_val<S>(out0 - out1) <= num_traits<S>::from_ratio(1, 10)) continue;

    Distribution<S> construct(yo, random_simplex<S>(n, rng));
    return JointDistribution<S>::from_cells(
        yo, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
          const auto& margin = (z == 0 ? m0 : m1);
          return construct[c] * margin[o] * rows[o][p] / S(2);
        });
  }
}

// Passes the alpha_prime-disparity test with equality while the alpha-hybrid
// worldview holds exactly, so the output disparity strictly exceeds the
// construct disparity whenever alpha < alpha_prime.
template <class S>
JointDistribution<S> alpha_counterexample(const S& alpha, const S& alpha_prime,
                                          std::uint64_t seed) {
  require(!(alpha < S(0)) && alpha < alpha_prime && !(S(1) < alpha_prime), Errc::wrong_order,
          "need 0 <= alpha < alpha_prime <= 1");
  Support yo = Support::binary01();
  Support yp = Support::binary01();
  Support yc = Support::binary01();

  S t(0);
  Distribution<S> m0, m1;
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t s = derive_seed(seed, 0xa1fa0 + attempt);
    SeedStream rng(s);
    m0 = Distribution<S>(yo, random_simplex<S>(2, rng));
    m1 = Distribution<S>(yo, random_simplex<S>(2, rng));
    t = tv_distance(m0, m1);
    if (!(t < num_traits<S>::from_ratio(1, 5))) break;
  }

  S spread = alpha_prime * t;  // the exact output disparity
  std::vector<S> v0{(S(1) - spread) / S(2), (S(1) + spread) / S(2)};
  std::vector<S> v1{(S(1) + spread) / S(2), (S(1) - spread) / S(2)};
  Distribution<S> out0(yp, std::move(v0)), out1(yp, std::move(v1));

  auto [c0, c1] = detail::margins_with_exact_tv<S>(yc, alpha * t, derive_seed(seed, 0xc0c0));
  return JointDistribution<S>::from_cells(
      yc, yo, yp, [&](int z, std::size_t c, std::size_t o, std::size_t p) {
        const auto& cm = (z == 0 ? c0 : c1);
        const auto& om = (z == 0 ? m0 : m1);
        const auto& pm = (z == 0 ? out0 : out1);
        return cm[c] * om[o] * pm[p] / S(2);
      });
}

// Yc, Z iid uniform; Yo = Yc; Yp = Yc xor Z. No output disparity, maximal
// misclassification disparity.
template <class S>
JointDistribution<S> xor_example() {
  Support b = Support::binary01();
  return JointDistribution<S>::from_cells(b, b, b,
                                          [&](int z, std::size_t c, std::size_t o, std::size_t p) {
                                            std::size_t want = c ^ static_cast<std::size_t>(z);
                                            if (o != c || p != want) return S(0);
                                            return num_traits<S>::from_ratio(1, 4);
                                          });
}

// Same base, but Yp = Z: equal misclassification rates in both groups, yet
// the output disparity is 1 against a construct disparity of 0.
template <class S>
JointDistribution<S> ypz_example() {
  Support b = Support::binary01();
  return JointDistribution<S>::from_cells(b, b, b,
                                          [&](int z, std::size_t c, std::size_t o, std::size_t p) {
                                            if (o != c || p != static_cast<std::size_t>(z))
                                              return S(0);
                                            return num_traits<S>::from_ratio(1, 4);
                                          });
}

}  // namespace ca
