#include "test_util.hpp"

using namespace ca;
using namespace catest;

TEMPLATE_TEST_CASE("maximal coupling", "[constructions]", double, Rational) {
  using S = TestType;

  SECTION("coupling a distribution with itself is the identity") {
    auto p = random_distribution<S>(sup({0, 1, 2}), 40);
    auto c = maximal_coupling(p, p);
    CHECK(near<S>(c.equal_mass(), S(1)));
    for (const auto& [u, v, m] : c.mass) CHECK(u == v);
  }

  SECTION("the diagonal mass is the sum of pointwise minima") {
    Distribution<S> p(b01(), {frac<S>(9, 10), frac<S>(1, 10)});
    Distribution<S> q(b01(), {frac<S>(1, 2), frac<S>(1, 2)});
    CHECK(near<S>(maximal_coupling(p, q).equal_mass(), frac<S>(3, 5)));
  }

  SECTION("disjoint supports never agree") {
    auto p = Distribution<S>::point_mass(sup_text({"a"}), Label::text("a"));
    auto q = Distribution<S>::point_mass(sup_text({"b"}), Label::text("b"));
    CHECK(near<S>(maximal_coupling(p, q).equal_mass(), S(0)));
  }

  SECTION("marginals match and the agreement equals 1 - tv") {
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto p = random_distribution<S>(sup({0, 1, 2, 3}), 2 * s);
      auto q = random_distribution<S>(sup({0, 1, 2, 3}), 2 * s + 1);
      auto c = maximal_coupling(p, q);
      std::vector<S> row(4, S(0)), col(4, S(0));
      for (const auto& [u, v, m] : c.mass) {
        REQUIRE(m > S(0));
        row[u] += m;
        col[v] += m;
      }
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(near<S>(row[i], p[i]));
        CHECK(near<S>(col[i], q[i]));
      }
      CHECK(near<S>(c.equal_mass(), S(1) - tv_distance(p, q)));
    }
  }
}

TEMPLATE_TEST_CASE("accuracy-maximizing demographic-parity model", "[constructions]", double,
                   Rational) {
  using S = TestType;

  SECTION("equal construct margins allow a perfect model") {
    auto c = random_distribution<S>(sup({0, 1, 2}), 7);
    auto base = harness::construct_base(c, c, frac<S>(1, 3));
    auto built = optimal_dem_parity_model(base);
    CHECK(near<S>(construct_accuracy(built.joint), S(1)));
    CHECK(demographic_parity(built.joint, S(0)).pass);
  }

  SECTION("margins 9/10 vs 1/2 reach exactly 4/5") {
    Distribution<S> c0(b01(), {frac<S>(1, 10), frac<S>(9, 10)});
    Distribution<S> c1(b01(), {frac<S>(1, 2), frac<S>(1, 2)});
    auto built = optimal_dem_parity_model(harness::construct_base(c0, c1, frac<S>(1, 2)));
    CHECK(near<S>(construct_accuracy(built.joint), frac<S>(4, 5)));
    CHECK(demographic_parity(built.joint, S(0)).pass);
  }

  SECTION("fully separated margins reach exactly 1/2") {
    auto c0 = Distribution<S>::point_mass(b01(), Label::number(0));
    auto c1 = Distribution<S>::point_mass(b01(), Label::number(1));
    auto built = optimal_dem_parity_model(harness::construct_base(c0, c1, frac<S>(1, 2)));
    CHECK(near<S>(construct_accuracy(built.joint), frac<S>(1, 2)));
  }

  SECTION("the construction attains but never exceeds the ceiling") {
    for (std::uint64_t s = 0; s < 25; ++s) {
      auto c0 = random_distribution<S>(sup({0, 1, 2}), 100 + 2 * s);
      auto c1 = random_distribution<S>(sup({0, 1, 2}), 101 + 2 * s);
      auto base = harness::construct_base(c0, c1, frac<S>(1, 4));
      auto built = optimal_dem_parity_model(base);
      CHECK(near<S>(construct_accuracy(built.joint), max_accuracy_under_dem_parity(base)));
    }
  }
}

TEMPLATE_TEST_CASE("predictive-parity adversary", "[constructions]", double, Rational) {
  using S = TestType;

  SECTION("the documented instance solves to the documented posteriors") {
    auto adv = pp_adversarial_model<S>(
        Distribution<S>(b01(), {frac<S>(2, 5), frac<S>(3, 5)}),
        Distribution<S>(b01(), {frac<S>(7, 10), frac<S>(3, 10)}), frac<S>(1, 50));
    CHECK(near<S>(adv.posteriors[1][0], frac<S>(591, 980)));
    CHECK(near<S>(adv.posteriors[1][1], frac<S>(291, 980)));
    CHECK(near<S>(output_disparity(adv.joint), frac<S>(49, 50)));
    CHECK(predictive_parity(adv.joint, S(0)).pass);
  }

  SECTION("symmetric margins give symmetric posteriors") {
    auto u = Distribution<S>::uniform(b01());
    auto adv = pp_adversarial_model<S>(u, u, frac<S>(1, 10));
    CHECK(near<S>(adv.posteriors[0][0], frac<S>(1, 2)));
    CHECK(near<S>(adv.posteriors[1][1], frac<S>(1, 2)));
  }

  SECTION("an epsilon too large for skewed margins is rejected") {
    Distribution<S> m0(b01(), {frac<S>(1, 100), frac<S>(99, 100)});
    Distribution<S> m1(b01(), {frac<S>(99, 100), frac<S>(1, 100)});
    CHECK(error_code_of([&] { pp_adversarial_model<S>(m0, m1, frac<S>(1, 2)); }) ==
          Errc::epsilon_too_large);
  }

  SECTION("margins must be positive everywhere") {
    Distribution<S> m0(b01(), {S(0), S(1)});
    auto u = Distribution<S>::uniform(b01());
    CHECK_THROWS_AS(pp_adversarial_model<S>(m0, u, frac<S>(1, 10)), AuditError);
  }
}

TEMPLATE_TEST_CASE("equalized-odds amplifying counterexample", "[constructions]", double,
                   Rational) {
  using S = TestType;
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 1234567ULL}) {
    auto ce = eqodds_amplifying_counterexample<S>(seed);
    CHECK(equalized_odds(ce, S(0)).pass);
    CHECK(disparity_amplification_categorical(ce).amplification);
    CHECK(output_disparity(ce) > frac<S>(1, 10));
    CHECK(near<S>(construct_disparity(ce), S(0)));
    CHECK_FALSE(worldview_holds(ce, Worldview<S>::WYSIWYG(), S(0)).holds);
    CHECK(eqodds_amplifying_counterexample<S>(seed) == ce);
  }
}

TEMPLATE_TEST_CASE("alpha counterexample", "[constructions]", double, Rational) {
  using S = TestType;

  SECTION("the generated table passes the larger test and amplifies") {
    auto ce = alpha_counterexample<S>(frac<S>(1, 5), frac<S>(4, 5), 11);
    CHECK(worldview_holds(ce, Worldview<S>::AlphaHybrid(frac<S>(1, 5)), S(0)).holds);
    auto test = alpha_disparity(ce, frac<S>(4, 5), S(0));
    CHECK(test.pass);
    CHECK(near<S>(test.statistic, S(0)));  // equality case
    auto rep = disparity_amplification_categorical(ce);
    CHECK(rep.amplification);
    CHECK(near<S>(rep.left, frac<S>(4, 5) * observed_disparity(ce)));
    CHECK(near<S>(rep.right, frac<S>(1, 5) * observed_disparity(ce)));
  }

  SECTION("equal alphas are rejected") {
    CHECK(error_code_of([&] { alpha_counterexample<S>(frac<S>(1, 2), frac<S>(1, 2), 3); }) ==
          Errc::wrong_order);
  }
}

TEMPLATE_TEST_CASE("fixed example tables", "[constructions]", double, Rational) {
  using S = TestType;

  SECTION("xor table") {
    auto x = xor_example<S>();
    CHECK(near<S>(output_disparity(x), S(0)));
    CHECK(near<S>(misclassification_parity(x, S(0)).statistic, S(1)));
    CHECK(near<S>(construct_accuracy(x), frac<S>(1, 2)));
    // Yc, Z iid uniform and Yo = Yc
    CHECK(near<S>(x.prob({{Var::Z, Label::number(0)}, {Var::Yc, Label::number(1)}}),
                  frac<S>(1, 4)));
    CHECK(worldview_holds(x, Worldview<S>::WYSIWYG(), S(0)).holds);
  }

  SECTION("group-echo table") {
    auto y = ypz_example<S>();
    CHECK(near<S>(construct_disparity(y), S(0)));
    CHECK(near<S>(output_disparity(y), S(1)));
    CHECK(near<S>(misclassification_parity(y, S(0)).statistic, S(0)));
  }
}
