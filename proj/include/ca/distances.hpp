#pragma once

#include <optional>
#include <vector>

#include "ca/distribution.hpp"
#include "ca/metric.hpp"

namespace ca {

// Half the L1 difference over the union of the two supports; missing labels
// read as zero. For binary supports this equals |p(1) - q(1)|.
template <class S>
S tv_distance(const Distribution<S>& p, const Distribution<S>& q) {
  if (p.support() == q.support()) {
    S acc(0);
    for (std::size_t i = 0; i < p.size(); ++i) acc += abs_val<S>(p[i] - q[i]);
    return acc / S(2);
  }
  Support all = p.support().united(q.support());
  S acc(0);
  for (const auto& l : all.labels()) acc += abs_val<S>(p.prob_of(l) - q.prob_of(l));
  return acc / S(2);
}

// Smallest rho such that |f(u)-f(v)| <= rho*d(u,v) over the labels where f is
// defined (nullopt entries are excluded). 0 when fewer than two are defined.
template <class S>
S lipschitz_constant(const std::vector<std::optional<S>>& f, const MetricSupport& ms) {
  require(f.size() == ms.support().size(), Errc::invalid_argument,
          "function values do not match metric support");
  S best(0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i]) continue;
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (!f[j]) continue;
      S slope = abs_val<S>(*f[i] - *f[j]) / ms.template distance<S>(i, j);
      if (best < slope) best = slope;
    }
  }
  return best;
}

template <class S>
S lipschitz_constant(const std::vector<S>& f, const MetricSupport& ms) {
  std::vector<std::optional<S>> wrapped(f.begin(), f.end());
  return lipschitz_constant(wrapped, ms);
}

// E_q[phi] - E_p[phi] for a 1-Lipschitz test function phi; a certified lower
// bound on the earthmover distance between p and q under ms.
template <class S>
S kantorovich_dual_bound(const Distribution<S>& p, const Distribution<S>& q,
                         const MetricSupport& ms, const std::vector<S>& phi) {
  require(p.support() == ms.support() && q.support() == ms.support(), Errc::metric_mismatch,
          "distributions must live on the metric support");
  S rho = lipschitz_constant(phi, ms);
  require(rho <= S(1) + num_traits<S>::report_tol(), Errc::not_lipschitz,
          "test function has Lipschitz constant " + num_traits<S>::str(rho));
  S acc(0);
  for (std::size_t i = 0; i < phi.size(); ++i) acc += phi[i] * (q[i] - p[i]);
  return acc;
}

}  // namespace ca
