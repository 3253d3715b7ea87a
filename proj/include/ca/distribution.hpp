#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "ca/scalar.hpp"
#include "ca/support.hpp"

namespace ca {

// A probability distribution over a finite support. Probabilities are stored
// aligned with the support's canonical label order.
template <class S>
class Distribution {
 public:
  Distribution() = default;

  Distribution(Support support, std::vector<S> probs) : support_(std::move(support)) {
    require(probs.size() == support_.size(), Errc::invalid_argument,
            "probability vector does not match support size");
    S mass(0);
    for (auto& p : probs) {
      if (p < S(0)) {
        require(-p <= num_traits<S>::mass_tol(), Errc::negative_probability,
                "negative probability " + num_traits<S>::str(p));
        p = S(0);  // absorb float round-off
      }
      mass += p;
    }
    require(abs_val<S>(mass - S(1)) <= num_traits<S>::mass_tol(), Errc::mass_not_one,
            "probabilities sum to " + num_traits<S>::str(mass));
    probs_ = std::move(probs);
  }

  static Distribution point_mass(Support support, const Label& at) {
    std::vector<S> p(support.size(), S(0));
    p[support.require_index(at)] = S(1);
    return Distribution(std::move(support), std::move(p));
  }

  static Distribution uniform(Support support) {
    auto n = static_cast<long long>(support.size());
    std::vector<S> p(support.size(), num_traits<S>::from_ratio(1, n));
    return Distribution(std::move(support), std::move(p));
  }

  const Support& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  const std::vector<S>& probs() const { return probs_; }
  const S& operator[](std::size_t i) const { return probs_[i]; }

  // 0 for labels outside the support (distributions extend by zero).
  S prob_of(const Label& l) const {
    if (auto i = support_.index_of(l)) return probs_[*i];
    return S(0);
  }

  S expectation() const {
    require(support_.all_numeric(), Errc::not_numeric, "expectation of non-numeric support");
    S acc(0);
    for (std::size_t i = 0; i < size(); ++i)
      acc += probs_[i] * num_traits<S>::from_rational(support_.at(i).value());
    return acc;
  }

  bool operator==(const Distribution& o) const {
    return support_ == o.support_ && probs_ == o.probs_;
  }

 private:
  Support support_;
  std::vector<S> probs_;
};

}  // namespace ca
