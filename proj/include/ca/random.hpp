#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ca/joint.hpp"

namespace ca {

// splitmix64: tiny, well-mixed, and identical on every platform, which the
// replayable-seed contract needs (std distributions are not portable).
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0, 1]
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  std::uint64_t fork(std::uint64_t salt) {
    SeedStream child(state_ ^ (salt * 0x9e3779b97f4a7c15ULL + 0x633d5c4733f0e6b1ULL));
    return child.next();
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return SeedStream(seed).fork(salt);
}

namespace detail {

// Standard-exponential cell weights normalize to a simplex-uniform point.
// Rational mode rounds each weight to a positive integer on a fine grid so
// the normalized table is exactly rational and still sums to one.
template <class S>
struct WeightDraw;

template <>
struct WeightDraw<double> {
  static double draw(SeedStream& rng) { return -std::log(rng.uniform01()); }
};

template <>
struct WeightDraw<Rational> {
  static Rational draw(SeedStream& rng) {
    double w = -std::log(rng.uniform01());
    auto grid = static_cast<long long>(std::llround(w * 4096.0));
    return Rational(grid < 1 ? 1 : grid);
  }
};

}  // namespace detail

template <class S>
std::vector<S> random_simplex(std::size_t n, SeedStream& rng) {
  std::vector<S> w(n);
  S total(0);
  for (auto& x : w) {
    x = detail::WeightDraw<S>::draw(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

template <class S>
Distribution<S> random_distribution(const Support& support, std::uint64_t seed) {
  SeedStream rng(seed);
  return Distribution<S>(support, random_simplex<S>(support.size(), rng));
}

template <class S>
JointDistribution<S> random_joint(const Support& yc, const Support& yo, const Support& yp,
                                  std::uint64_t seed) {
  SeedStream rng(seed);
  auto cells = random_simplex<S>(2 * yc.size() * yo.size() * yp.size(), rng);
  return JointDistribution<S>(yc, yo, yp, std::move(cells));
}

template <class S>
ModelKernel<S> random_kernel(const Support& yo, const Support& yp, std::uint64_t seed) {
  SeedStream rng(seed);
  ModelKernel<S> k(yo, yp);
  for (int z = 0; z < 2; ++z)
    for (const auto& l : yo.labels())
      k.set_row(z, l, Distribution<S>(yp, random_simplex<S>(yp.size(), rng)));
  return k;
}

}  // namespace ca
