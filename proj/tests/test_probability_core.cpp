#include "test_util.hpp"

using namespace ca;
using namespace catest;

namespace {

// Uniform table over {0,1}^4, every cell 1/16.
template <class S>
JointDistribution<S> uniform4() {
  return JointDistribution<S>::from_cells(b01(), b01(), b01(), [](int, std::size_t, std::size_t,
                                                                  std::size_t) {
    return num_traits<S>::from_ratio(1, 16);
  });
}

}  // namespace

TEMPLATE_TEST_CASE("joint table validation", "[probability_core]", double, Rational) {
  using S = TestType;

  SECTION("uniform table is valid") {
    auto j = uniform4<S>();
    CHECK(near<S>(j.group_mass(0), frac<S>(1, 2)));
  }

  SECTION("mass must be one") {
    std::vector<CellSpec<S>> cells;
    cells.push_back({0, Label::number(0), Label::number(0), Label::number(0), frac<S>(45, 100)});
    cells.push_back({1, Label::number(0), Label::number(0), Label::number(0), frac<S>(45, 100)});
    CHECK(error_code_of([&] { make_joint<S>(b01(), b01(), b01(), cells); }) == Errc::mass_not_one);
  }

  SECTION("a group with zero mass is rejected") {
    std::vector<CellSpec<S>> cells;
    cells.push_back({0, Label::number(0), Label::number(0), Label::number(0), S(1)});
    CHECK(error_code_of([&] { make_joint<S>(b01(), b01(), b01(), cells); }) == Errc::empty_group);
  }

  SECTION("negative probabilities are rejected") {
    std::vector<CellSpec<S>> cells;
    cells.push_back({0, Label::number(0), Label::number(0), Label::number(0), S(1) - S(-1)});
    cells.back().p = S(-1);
    CHECK_THROWS_AS(make_joint<S>(b01(), b01(), b01(), cells), AuditError);
  }

  SECTION("labels outside the declared supports are rejected") {
    std::vector<CellSpec<S>> cells;
    cells.push_back({0, Label::number(7), Label::number(0), Label::number(0), S(1)});
    CHECK(error_code_of([&] { make_joint<S>(b01(), b01(), b01(), cells); }) == Errc::unknown_label);
  }
}

TEMPLATE_TEST_CASE("marginals", "[probability_core]", double, Rational) {
  using S = TestType;
  auto j = uniform4<S>();

  SECTION("uniform marginal over Z is (1/2, 1/2)") {
    auto m = j.marginal(Var::Z);
    CHECK(near<S>(m[0], frac<S>(1, 2)));
    CHECK(near<S>(m[1], frac<S>(1, 2)));
  }

  SECTION("marginals sum to one") {
    for (auto v : {Var::Z, Var::Yc, Var::Yo, Var::Yp}) {
      auto m = j.marginal(v);
      S total(0);
      for (std::size_t i = 0; i < m.size(); ++i) total += m[i];
      CHECK(near<S>(total, S(1)));
    }
  }

  SECTION("adversarial construction has a balanced prediction margin") {
    auto adv = pp_adversarial_model<S>(
        Distribution<S>(b01(), {frac<S>(2, 5), frac<S>(3, 5)}),
        Distribution<S>(b01(), {frac<S>(7, 10), frac<S>(3, 10)}), frac<S>(1, 50));
    auto m = adv.joint.marginal(Var::Yp);
    CHECK(near<S>(m.prob_of(Label::number(1)), frac<S>(1, 2)));
  }
}

TEMPLATE_TEST_CASE("conditioning", "[probability_core]", double, Rational) {
  using S = TestType;

  SECTION("conditioning an independent table changes nothing") {
    auto j = uniform4<S>();
    auto m = j.given_z(Var::Yp, 1);
    CHECK(near<S>(m[0], frac<S>(1, 2)));
  }

  SECTION("conditioning on a zero-mass event is an error") {
    auto j = uniform4<S>();
    CHECK(error_code_of([&] { j.condition(Var::Yp, {{Var::Yo, Label::number(0)}, {Var::Yc, Label::number(0)}, {Var::Z, Label::number(0)}, {Var::Yp, Label::number(0)}}); }) == Errc::invalid_argument);
    // a genuinely zero-mass slice
    auto x = xor_example<S>();
    CHECK(error_code_of([&] { x.condition(Var::Yp, {{Var::Yc, Label::number(0)}, {Var::Yo, Label::number(1)}}); }) == Errc::zero_mass_condition);
  }

  SECTION("xor table: given Z=0 the prediction is a coin flip") {
    auto x = xor_example<S>();
    auto m = x.given_z(Var::Yp, 0);
    CHECK(near<S>(m.prob_of(Label::number(1)), frac<S>(1, 2)));
  }

  SECTION("conditioning then remixing reproduces the marginal") {
    auto j = random_joint<S>(sup({0, 1, 2}), b01(), b01(), 2024);
    auto z = j.marginal(Var::Z);
    auto full = j.marginal(Var::Yp);
    auto m0 = j.given_z(Var::Yp, 0);
    auto m1 = j.given_z(Var::Yp, 1);
    for (std::size_t i = 0; i < full.size(); ++i)
      CHECK(near<S>(z[0] * m0[i] + z[1] * m1[i], full[i]));
  }
}

TEMPLATE_TEST_CASE("empirical estimation", "[probability_core]", double, Rational) {
  using S = TestType;

  SECTION("equal counts give the uniform table") {
    std::vector<SampleRecord> recs;
    for (int z = 0; z < 2; ++z)
      for (int p = 0; p < 2; ++p)
        recs.push_back({z, Label::number(0), Label::number(p), std::nullopt});
    auto j = from_samples<S>(recs, b01(), b01(), std::nullopt);
    CHECK(near<S>(j.prob({{Var::Z, Label::number(0)}, {Var::Yp, Label::number(1)}}),
                  frac<S>(1, 4)));
    CHECK_FALSE(j.has_construct());
  }

  SECTION("missing group is an error") {
    std::vector<SampleRecord> recs{{0, Label::number(0), Label::number(0), std::nullopt}};
    CHECK(error_code_of([&] { from_samples<S>(recs, b01(), b01(), std::nullopt); }) == Errc::empty_group);
  }

  SECTION("duplicating every record leaves the table unchanged") {
    std::vector<SampleRecord> base{{0, Label::number(0), Label::number(1), std::nullopt},
                                   {1, Label::number(1), Label::number(0), std::nullopt}};
    std::vector<SampleRecord> dup;
    for (int k = 0; k < 10; ++k)
      for (const auto& r : base) dup.push_back(r);
    auto a = from_samples<S>(base, b01(), b01(), std::nullopt);
    auto b = from_samples<S>(dup, b01(), b01(), std::nullopt);
    CHECK(a == b);
  }

  SECTION("mixed construct presence is an error") {
    std::vector<SampleRecord> recs{{0, Label::number(0), Label::number(0), Label::number(0)},
                                   {1, Label::number(0), Label::number(0), std::nullopt}};
    CHECK(error_code_of([&] { from_samples<S>(recs, b01(), b01(), b01()); }) == Errc::mixed_construct_presence);
  }

  SECTION("unknown labels are rejected") {
    std::vector<SampleRecord> recs{{0, Label::number(5), Label::number(0), std::nullopt},
                                   {1, Label::number(0), Label::number(0), std::nullopt}};
    CHECK_THROWS_AS(from_samples<S>(recs, b01(), b01(), std::nullopt), AuditError);
  }
}

TEST_CASE("replicated datasets reproduce rational tables exactly", "[probability_core]") {
  auto x = xor_example<Rational>();
  std::vector<SampleRecord> recs;
  x.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const Rational& mass) {
    // every positive cell of the xor table has mass 1/4
    long long copies = static_cast<long long>(mass * 4);
    for (long long k = 0; k < copies; ++k)
      recs.push_back({z, x.support(Var::Yo).at(o), x.support(Var::Yp).at(p),
                      x.support(Var::Yc).at(c)});
  });
  REQUIRE(recs.size() == 4);
  auto j = from_samples<Rational>(recs, b01(), b01(), b01());
  CHECK(j == x);
}

TEMPLATE_TEST_CASE("model application", "[probability_core]", double, Rational) {
  using S = TestType;
  auto base = random_joint<S>(sup({0, 1}), sup({0, 1, 2}), harness::unit_support(), 99);

  SECTION("constant kernels produce no output disparity") {
    auto k = ModelKernel<S>::constant(base.support(Var::Yo),
                                      Distribution<S>::point_mass(sup_text({"a", "b"}),
                                                                  Label::text("a")));
    auto j = apply_model(base, k);
    CHECK(near<S>(output_disparity(j), S(0)));
  }

  SECTION("the identity kernel passes equalized odds exactly") {
    auto k = ModelKernel<S>::identity(base.support(Var::Yo));
    auto j = apply_model(base, k);
    CHECK(equalized_odds(j, S(0)).pass);
  }

  SECTION("a group-revealing kernel maximizes output disparity") {
    // Yp := Z while the construct stays independent of Z
    auto c = random_distribution<S>(sup({0, 1}), 4);
    auto indep = detail::replace_construct(base, c, c);
    ModelKernel<S> k(indep.support(Var::Yo), b01());
    for (const auto& l : indep.support(Var::Yo).labels()) {
      k.set_row(0, l, Distribution<S>::point_mass(b01(), Label::number(0)));
      k.set_row(1, l, Distribution<S>::point_mass(b01(), Label::number(1)));
    }
    auto j = apply_model(indep, k);
    CHECK(near<S>(output_disparity(j), S(1)));
    CHECK(near<S>(construct_disparity(j), S(0)));
  }

  SECTION("the base marginal over (Yc, Yo, Z) is preserved") {
    auto k = random_kernel<S>(base.support(Var::Yo), sup({0, 1}), 5);
    auto j = apply_model(base, k);
    for (int z = 0; z < 2; ++z) {
      auto before = base.condition(Var::Yo, {{Var::Z, Label::number(z)}});
      auto after = j.condition(Var::Yo, {{Var::Z, Label::number(z)}});
      for (std::size_t i = 0; i < before.size(); ++i) CHECK(near<S>(before[i], after[i]));
    }
  }

  SECTION("conditioning the output on (Yo, Z) recovers the kernel row") {
    auto k = random_kernel<S>(base.support(Var::Yo), sup({0, 1}), 6);
    auto j = apply_model(base, k);
    for (int z = 0; z < 2; ++z)
      for (std::size_t o = 0; o < base.support(Var::Yo).size(); ++o) {
        auto row = *k.row(z, o);
        auto got = j.condition(Var::Yp, {{Var::Yo, base.support(Var::Yo).at(o)},
                                         {Var::Z, Label::number(z)}});
        for (std::size_t i = 0; i < row.size(); ++i) CHECK(near<S>(row[i], got[i]));
      }
  }

  SECTION("missing kernel rows are an error") {
    ModelKernel<S> k(base.support(Var::Yo), b01());
    k.set_shared_row(Label::number(0), Distribution<S>::uniform(b01()));
    CHECK(error_code_of([&] { apply_model(base, k); }) == Errc::missing_kernel_row);
  }
}

TEMPLATE_TEST_CASE("seeded generation", "[probability_core]", double, Rational) {
  using S = TestType;

  SECTION("the same seed reproduces the same table") {
    auto a = random_joint<S>(b01(), b01(), b01(), 1234);
    auto b = random_joint<S>(b01(), b01(), b01(), 1234);
    CHECK(a == b);
  }

  SECTION("different seeds give different tables") {
    auto a = random_joint<S>(b01(), b01(), b01(), 1);
    auto b = random_joint<S>(b01(), b01(), b01(), 2);
    CHECK_FALSE(a == b);
  }
}

TEST_CASE("group mass is unbiased across seeds", "[probability_core]") {
  double acc = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s)
    acc += random_joint<double>(b01(), b01(), b01(), 777000 + s).group_mass(1);
  CHECK(std::abs(acc / n - 0.5) < 0.02);
}
