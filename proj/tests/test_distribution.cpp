#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "subweibull/distribution.hpp"
#include "subweibull/error.hpp"
#include "subweibull/quadrature.hpp"
#include "subweibull/random.hpp"
#include "subweibull/verify.hpp"

using namespace subweibull;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DistributionSpec::weibull(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::weibull(1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::pnormal(-2.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::halfgauss_pow(2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(DistributionSpec::pnormal(NAN), ParameterError);
  RandomStream s(1, 0);
  CHECK_THROWS_AS(sample(DistributionSpec::exponential(), s, 0), ParameterError);
}

TEST_CASE("densities at known points") {
  CHECK(density(DistributionSpec::exponential(), 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(density(DistributionSpec::exponential(), -1.0) == 0.0);
  // scipy.stats.gennorm-style oracle: (p / (2 sqrt(2 pi))) |x|^{p/2-1} e^{-|x|^p/2} at p=1, x=1
  CHECK(density(DistributionSpec::pnormal(1.0), 1.0) == doctest::Approx(0.12098536225957168).epsilon(1e-14));
  CHECK(density(DistributionSpec::pnormal(1.0), -1.0) == doctest::Approx(0.12098536225957168).epsilon(1e-14));
  CHECK(std::isinf(density(DistributionSpec::pnormal(1.0), 0.0)));
  const double g = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(density(DistributionSpec::pnormal(2.0), 1.0) == doctest::Approx(g).epsilon(1e-14));
  CHECK(density(DistributionSpec::weibull(2.0, 1.0), 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("total mass is one") {
  for (const auto& spec : {DistributionSpec::exponential(), DistributionSpec::weibull(0.3, 2.0),
                           DistributionSpec::weibull(5.0, 0.5), DistributionSpec::pnormal(0.5),
                           DistributionSpec::pnormal(1.0), DistributionSpec::pnormal(6.0),
                           DistributionSpec::halfgauss_pow(1.5, 3.0)}) {
    CHECK(total_mass(spec) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("moments") {
  // E|g_p|^p = 1
  for (double p : {0.5, 1.0, 2.0, 3.0, 7.0}) CHECK(DistributionSpec::pnormal(p).abs_moment(p) == doctest::Approx(1.0));
  CHECK(DistributionSpec::pnormal(3.0).abs_moment(2.5) == doctest::Approx(0.897686900876088227830096388403));
  CHECK(DistributionSpec::weibull(2.0, 3.0).abs_moment(2.0) == doctest::Approx(9.0));
  CHECK(DistributionSpec::exponential().mean() == 1.0);
  CHECK(DistributionSpec::pnormal(1.0).mean() == 0.0);
  const auto spec = DistributionSpec::weibull(1.7, 0.8);
  const double quad = expect(spec, [](double x) { return x * x * x; });
  CHECK(quad == doctest::Approx(spec.abs_moment(3.0)).epsilon(1e-10));
}

TEST_CASE("tails") {
  CHECK(DistributionSpec::exponential().tail(2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(DistributionSpec::pnormal(2.0).tail(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(DistributionSpec::weibull(3.0, 2.0).tail(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(DistributionSpec::pnormal(3.0).tail(0.0) == 1.0);
}

TEST_CASE("mgf closed forms and divergence") {
  const auto e = DistributionSpec::exponential();
  CHECK(*e.mgf(MgfTransform::identity, 1.0, 0.5) == doctest::Approx(2.0));
  CHECK(std::isinf(*e.mgf(MgfTransform::identity, 1.0, 1.0)));
  CHECK(std::isinf(*e.mgf(MgfTransform::identity, 1.0, 3.0)));
  CHECK(*e.mgf(MgfTransform::identity, 1.0, -1.0) == doctest::Approx(0.5));
  // E exp(|g_p|^p / K^p) at K^p = 8/3 equals 2
  const auto g3 = DistributionSpec::pnormal(3.0);
  CHECK(*g3.mgf(MgfTransform::abs_pow, 3.0, 3.0 / 8.0) == doctest::Approx(2.0));
  CHECK(std::isinf(*g3.mgf(MgfTransform::abs_pow, 3.0, 0.5)));
}

TEST_CASE("divergence classification") {
  const auto e = DistributionSpec::exponential();
  CHECK(classify_divergence(e, {0.5, 1.0, true}) < 0);
  CHECK(classify_divergence(e, {1.0, 1.0, true}) > 0);
  CHECK(classify_divergence(e, {1e-6, 1.5, true}) > 0);
  CHECK(classify_divergence(e, {1.0, 1.0, false}) == 0);
  const auto g = DistributionSpec::pnormal(2.0);
  CHECK(classify_divergence(g, {0.49, 2.0, true}) < 0);
  CHECK(classify_divergence(g, {0.5, 2.0, true}) > 0);
}

TEST_CASE("expect_exp matches closed form and signals divergence") {
  const auto e = DistributionSpec::exponential();
  CHECK(expect_exp(e, [](double x) { return 0.5 * x; }, {0.5, 1.0, true}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isinf(expect_exp(e, [](double x) { return x; }, {1.0, 1.0, true})));
  QuadratureOptions capped;
  capped.cap = 2.0;
  CHECK(std::isinf(expect_exp(e, [](double x) { return 0.9 * x; }, {0.9, 1.0, true}, {}, capped)));
}

TEST_CASE("samplers match laws") {
  constexpr std::size_t kN = 100000;
  for (const auto& spec : {DistributionSpec::exponential(), DistributionSpec::weibull(0.7, 2.0),
                           DistributionSpec::pnormal(1.0), DistributionSpec::pnormal(3.0),
                           DistributionSpec::halfgauss_pow(2.5, 0.5)}) {
    RandomStream s(99, 0);
    auto x = sample(spec, s, kN);
    std::sort(x.begin(), x.end());
    // one-sample KS against the exact tail of |X| (symmetric laws) or X
    double d = 0.0;
    const bool symmetric = spec.family() == Family::pnormal;
    for (std::size_t i = 0; i < kN; ++i) {
      const double cdf = symmetric ? (x[i] < 0.0 ? 0.5 * spec.tail(-x[i]) : 1.0 - 0.5 * spec.tail(x[i]))
                                   : 1.0 - spec.tail(x[i]);
      d = std::max({d, std::abs(cdf - double(i) / kN), std::abs(cdf - double(i + 1) / kN)});
    }
    CHECK(d < 1.95 / std::sqrt(double(kN)));
  }
}

TEST_CASE("KS helper") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_critical_001(100000, 100000) == doctest::Approx(1.9495 * std::sqrt(2e-5)).epsilon(1e-4));
}
