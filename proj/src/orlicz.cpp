#include "subweibull/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "subweibull/bisection.hpp"
#include "subweibull/error.hpp"
#include "subweibull/quadrature.hpp"

namespace subweibull {

namespace {

constexpr double kTwo = 2.0;

void require_p(double p) {
  if (!std::isfinite(p) || !(p > 0.0)) throw ParameterError("p must be finite and > 0");
}

}  // namespace

std::string to_string(NormMethod method) {
  switch (method) {
    case NormMethod::analytic: return "analytic";
    case NormMethod::quadrature: return "quadrature";
    case NormMethod::empirical: return "empirical";
  }
  return "?";
}

double orlicz_functional(const DistributionSpec& spec, double p, double K, const Pushforward& push,
                         double cap) {
  require_p(p);
  const double scale = std::abs(push.scale);
  auto exponent = [&](double x) {
    const double d = std::abs(x - push.shift);
    if (d == 0.0) return 0.0;
    return std::pow(scale * std::pow(d, push.power) / K, p);
  };
  const Growth growth{std::pow(scale / K, p), push.power * p, push.shift == 0.0};
  const double breaks[] = {push.shift};
  std::span<const double> x_breaks;
  if (push.shift != 0.0) x_breaks = breaks;
  return expect_exp(spec, exponent, growth, x_breaks, QuadratureOptions{1e-13, cap});
}

OrliczNormResult psi_norm_analytic(const DistributionSpec& spec, double p) {
  require_p(p);
  if (p != spec.shape()) {
    throw NoClosedFormError("no closed-form psi_" + std::to_string(p) + " norm for " + spec.name() +
                            " with shape " + std::to_string(spec.shape()));
  }
  // |X|^p is theta^p E (E ~ Exp(1)) or theta^p G^2; E exp(s E) = 2 at s = 1/2
  // and E exp(s G^2) = 2 at s = 3/8.
  double base = 0.0;
  switch (spec.family()) {
    case Family::exponential:
    case Family::weibull: base = 2.0; break;
    case Family::pnormal:
    case Family::halfgauss_pow: base = 8.0 / 3.0; break;
  }
  const double value = spec.scale() * std::pow(base, 1.0 / p);
  OrliczNormResult result{value, p, NormMethod::analytic, value, value, 0.0};
  const auto phi = spec.mgf(MgfTransform::abs_pow, p, std::pow(value, -p));
  if (phi) result.residual = std::abs(*phi - kTwo);
  return result;
}

OrliczNormResult psi_norm_quadrature(const DistributionSpec& spec, double p,
                                     const NormOptions& options, const Pushforward& push) {
  require_p(p);
  if (!(options.tol > 0.0)) throw ParameterError("tol must be > 0");
  if (push.scale == 0.0 || !(push.power > 0.0)) throw ParameterError("degenerate pushforward");
  // Phi(K) <= 2 is monotone in K (Phi is nonincreasing).
  auto feasible = [&](double K) { return orlicz_functional(spec, p, K, push, kTwo) <= kTwo; };

  OrliczNormResult result;
  result.p = p;
  result.method = NormMethod::quadrature;
  if (feasible(options.lo_start)) {
    result.lo = 0.0;
    result.hi = options.lo_start;
  } else {
    Bracket bracket{};
    try {
      bracket = expand_upward(feasible, options.lo_start, 1.0, options.max_K);
    } catch (const InfeasibleError&) {
      throw DivergenceError("E exp(|X/K|^p) > 2 for every K up to " + std::to_string(options.max_K));
    }
    bracket = bisect_threshold(feasible, bracket.lo, bracket.hi, options.tol);
    result.lo = bracket.lo;
    result.hi = bracket.hi;
  }
  result.value = result.hi;
  result.residual = std::abs(orlicz_functional(spec, p, result.value, push) - kTwo);
  return result;
}

OrliczNormResult psi_norm_empirical(std::span<const double> samples, double p, double tol) {
  require_p(p);
  if (samples.size() < 100) {
    throw ParameterError("empirical psi norm needs at least 100 samples, got " +
                         std::to_string(samples.size()));
  }
  const double n = static_cast<double>(samples.size());
  std::vector<double> powers(samples.size());
  double x_max = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = std::abs(samples[i]);
    if (!std::isfinite(a)) throw ParameterError("non-finite sample");
    x_max = std::max(x_max, a);
    powers[i] = std::pow(a, p);
  }
  OrliczNormResult result;
  result.p = p;
  result.method = NormMethod::empirical;
  if (x_max == 0.0) return result;

  auto phi = [&](double K) {
    const double inv = std::pow(K, -p);
    double sum = 0.0;
    for (double y : powers) sum += std::exp(y * inv);
    return sum / n;
  };
  auto feasible = [&](double K) { return phi(K) <= kTwo; };

  // The largest sample alone pushes the mean past 2 once |x_max/K|^p > ln(2N),
  // and the mean is at most exp(|x_max/K|^p), which is <= 2 for K >= x_max / (ln 2)^{1/p}.
  double lo = x_max / std::pow(std::log(2.0 * n), 1.0 / p);
  double hi = x_max / std::pow(std::numbers::ln2, 1.0 / p);
  while (feasible(lo)) lo *= 0.5;
  while (!feasible(hi)) hi *= 2.0;
  const Bracket bracket = bisect_threshold(feasible, lo, hi, tol);
  result.lo = bracket.lo;
  result.hi = bracket.hi;
  result.value = bracket.hi;
  result.residual = std::abs(phi(result.value) - kTwo);
  return result;
}

NormPair power_norm_identity(const DistributionSpec& spec, double p, double r,
                             const NormOptions& options) {
  require_p(p);
  require_p(r);
  NormPair out;
  out.lhs = psi_norm_quadrature(spec, r, options, Pushforward{1.0, 0.0, p}).value;
  double base = 0.0;
  try {
    base = psi_norm_analytic(spec, p * r).value;
  } catch (const NoClosedFormError&) {
    base = psi_norm_quadrature(spec, p * r, options).value;
  }
  out.rhs = std::pow(base, p);
  return out;
}

EquivalenceConstants check_equivalence(const DistributionSpec& spec, double p, double K) {
  require_p(p);
  const double norm = psi_norm_quadrature(spec, p).value;
  if (!(K >= norm * (1.0 - 1e-7))) {
    throw ParameterError("K = " + std::to_string(K) + " is below the psi_p norm " +
                         std::to_string(norm));
  }

  // Tail condition with L = K against the exact tail.
  const double L = K;
  const double t_max = K * std::pow(40.0, 1.0 / p);
  constexpr int kTailGrid = 1000;
  for (int i = 0; i <= kTailGrid; ++i) {
    const double t = t_max * i / kTailGrid;
    const double bound = 2.0 * std::exp(-std::pow(t / L, p));
    if (spec.tail(t) > bound * (1.0 + 1e-12)) {
      throw VerificationError("tail condition P(|X|>=t) <= 2exp(-(t/L)^p) fails", t);
    }
  }
  // A certified tail constant bounds the norm by 3^{1/p} L.
  if (norm > std::pow(3.0, 1.0 / p) * L * (1.0 + 1e-9)) {
    throw VerificationError("norm exceeds 3^{1/p} L", L);
  }

  // Moment condition: smallest M with E|X|^a <= 2 M^a Gamma(a/p + 1) on the grid.
  // Condition 1 with K implies it with M = K, since y^k <= Gamma(k+1) e^y.
  double M = 0.0;
  for (int i = 1; i <= 80; ++i) {
    const double alpha = 0.25 * i;
    const double moment = expect(spec, [alpha](double x) { return std::pow(std::abs(x), alpha); });
    const double m_alpha = std::pow(moment / (2.0 * std::tgamma(alpha / p + 1.0)), 1.0 / alpha);
    if (m_alpha > K * (1.0 + 1e-9)) {
      throw VerificationError("moment condition needs M > K", alpha);
    }
    M = std::max(M, m_alpha);
  }
  return {K, L, M, p};
}

CenteringCheck centering_bound_check(const DistributionSpec& spec, double p,
                                     const NormOptions& options) {
  if (!(p >= 1.0)) throw ParameterError("centering bound needs p >= 1");
  const double mean = spec.mean();
  CenteringCheck out;
  out.norm = psi_norm_quadrature(spec, p, options).value;
  out.rhs = 2.0 * out.norm;
  out.lhs = psi_norm_quadrature(spec, p, options, Pushforward{1.0, mean, 1.0}).value;
  out.mean_norm = std::abs(mean) / std::pow(std::numbers::ln2, 1.0 / p);
  return out;
}

}  // namespace subweibull
