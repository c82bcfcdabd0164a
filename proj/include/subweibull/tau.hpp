#pragma once

#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "subweibull/distribution.hpp"
#include "subweibull/orlicz.hpp"

namespace subweibull {

// phi_1(x) = x^2/2 for |x| <= 1, |x| - 1/2 otherwise.
double phi1(double x);
// phi_inf(x) = x^2/2 for |x| <= 1, +infinity otherwise.
double phi_inf(double x);

/// Cumulant generating function t -> ln E exp(tX) of a centered variable,
/// with its first two derivatives, on the open domain (lower, upper).
struct Cumulant {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  // Within 1e-12 of a domain edge, or outside, counts as outside.
  bool in_domain(double t) const;
  double operator()(double t) const;
  double curvature(double t) const;

  // Exp(1) - 1: -t - ln(1 - t), t < 1.
  static Cumulant exp_centered();
  // N(0, sigma^2): sigma^2 t^2 / 2.
  static Cumulant gaussian(double sigma);

  // t -> C(a t), the cumulant of aX.
  Cumulant scaled(double a) const;
  // t -> n C(t), the centered sum of n independent copies.
  Cumulant times(double n) const;
  // Cumulant of the sum of two independent variables.
  Cumulant operator+(const Cumulant& other) const;
};

// Throws NoClosedFormError for laws without a closed-form centered cumulant
// (supported: Exp, Weibull with shape 1, PNormal(2)).
Cumulant centered_cumulant(const DistributionSpec& spec);

struct TauNormResult {
  double value = 0.0;
  // (t, phi_inf(value t) - C(t)) over a uniform grid of [-1/value, 1/value].
  std::vector<std::pair<double, double>> margin_profile;
};

struct TauOptions {
  double tol = 1e-10;  // relative bracket width on K
  int grid = 10000;
  int newton_steps = 3;
  double max_K = 1e8;
  int profile_points = 101;
};

// sup over |t| <= 1/K of C''(t) - K^2, and of C(t) - K^2 t^2 / 2. +infinity
// when the interval reaches the edge of the cumulant's domain.
double curvature_excess(const Cumulant& cumulant, double K, const TauOptions& options = {});
double pointwise_excess(const Cumulant& cumulant, double K, const TauOptions& options = {});

/// tau_phi1 norm: smallest K with C''(t) <= K^2 on |t| <= 1/K.
///
/// Because C(0) = C'(0) = 0, the Taylor remainder then gives
/// C(t) <= K^2 t^2 / 2 = phi_inf(K t) on the same interval, so the returned K
/// certifies cumulant domination. Exp(1) - 1 gives exactly 2 and the centered
/// sum of n copies gives sqrt(n) + 1. Throws InfeasibleError past max_K.
TauNormResult tau_norm(const Cumulant& cumulant, const TauOptions& options = {});

// Pointwise infimum of K with C(t) <= phi_inf(K t) for every t. Never exceeds
// tau_norm; 1.43207 for Exp(1) - 1.
TauNormResult tau_norm_pointwise(const Cumulant& cumulant, const TauOptions& options = {});

// sup_u {t u - f(u)} for f even, convex, f(0) = 0, possibly +infinity outside
// a symmetric interval. Throws UnboundedSupError when the supremum runs into
// search_bound with positive slope.
double convex_conjugate(const std::function<double(double)>& f, double t, double search_bound);

// lhs = tau of the sum of the independent centered variables, rhs = sqrt(sum tau_i^2).
NormPair rotation_invariance_check(std::span<const DistributionSpec> specs,
                                   const TauOptions& options = {});

struct BernsteinBound {
  double phi1_form = 0.0;  // 2 exp(-n phi_1(t / (2 C1 K)))
  double min_form = 0.0;   // 2 exp(-(n/2) min{u^2, u}), u = t / (2 C1 K)
};

BernsteinBound bernstein_bound(long n, double t, double K, double C1);

}  // namespace subweibull
