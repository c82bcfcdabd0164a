#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subweibull/error.hpp"
#include "subweibull/tau.hpp"

using namespace subweibull;

TEST_CASE("phi pair") {
  CHECK(phi1(0.5) == 0.125);
  CHECK(phi1(-3.0) == 2.5);
  CHECK(phi_inf(1.0) == 0.5);
  CHECK(std::isinf(phi_inf(1.0000001)));
}

TEST_CASE("tau of the centered exponential") {
  CHECK(tau_norm(Cumulant::exp_centered()).value == doctest::Approx(2.0).epsilon(1e-6));
  // scipy brentq on sup_t C(t) - K^2 t^2 / 2 = 0 (pointwise domination)
  CHECK(tau_norm_pointwise(Cumulant::exp_centered()).value == doctest::Approx(1.4320688735822122).epsilon(1e-6));
}

TEST_CASE("centered n-sums give sqrt(n) + 1") {
  for (double n : {1.0, 4.0, 9.0, 100.0, 2500.0}) {
    CHECK(tau_norm(Cumulant::exp_centered().times(n)).value == doctest::Approx(std::sqrt(n) + 1.0).epsilon(1e-6));
  }
}

TEST_CASE("gaussian tau is sigma") {
  CHECK(tau_norm(Cumulant::gaussian(1.0)).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(tau_norm(Cumulant::gaussian(3.5)).value == doctest::Approx(3.5).epsilon(1e-8));
}

TEST_CASE("margin profile is nonnegative") {
  const auto r = tau_norm(Cumulant::exp_centered());
  CHECK(r.margin_profile.size() == 101);
  for (const auto& [t, m] : r.margin_profile) CHECK(m >= -1e-12);
  CHECK(r.margin_profile.front().first == doctest::Approx(-0.5));
}

TEST_CASE("centered cumulants from distributions") {
  CHECK(tau_norm(centered_cumulant(DistributionSpec::exponential())).value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(tau_norm(centered_cumulant(DistributionSpec::weibull(1.0, 3.0))).value == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(tau_norm(centered_cumulant(DistributionSpec::pnormal(2.0))).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(centered_cumulant(DistributionSpec::pnormal(3.0)), NoClosedFormError);
}

TEST_CASE("rotation invariance") {
  std::vector<DistributionSpec> specs(4, DistributionSpec::exponential());
  const auto r = rotation_invariance_check(specs);
  CHECK(r.lhs == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.rhs == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(r.lhs <= r.rhs);
}

TEST_CASE("convex conjugate") {
  CHECK(convex_conjugate(phi_inf, 3.0, 2.0) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(convex_conjugate(phi_inf, 0.5, 2.0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(convex_conjugate(phi_inf, -7.0, 2.0) == doctest::Approx(6.5).epsilon(1e-12));
  auto quad = [](double u) { return 0.5 * u * u; };
  CHECK(convex_conjugate(quad, 4.0, 100.0) == doctest::Approx(8.0).epsilon(1e-10));
  CHECK_THROWS_AS(convex_conjugate(quad, 4.0, 2.0), UnboundedSupError);
  auto linear = [](double u) { return std::abs(u); };
  CHECK_THROWS_AS(convex_conjugate(linear, 2.0, 1e3), UnboundedSupError);
}

TEST_CASE("mgf domination for Exp - 1") {
  const Cumulant c = Cumulant::exp_centered();
  for (int i = 0; i <= 1000; ++i) {
    const double t = -0.5 + i / 1000.0;
    if (!c.in_domain(t)) continue;
    CHECK(c(t) <= phi_inf(2.0 * t) + 1e-15);
  }
}

TEST_CASE("bernstein bound") {
  const auto b = bernstein_bound(10, 4.0, 1.0, 2.0);
  CHECK(b.phi1_form == doctest::Approx(2.0 * std::exp(-10.0 * 0.5)));
  CHECK(b.min_form == doctest::Approx(2.0 * std::exp(-5.0)));
  CHECK(b.phi1_form <= b.min_form);
  CHECK_THROWS_AS(bernstein_bound(0, 1.0, 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(bernstein_bound(3, -1.0, 1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(bernstein_bound(3, 1.0, 1.0, 0.5), ParameterError);
}
