#pragma once

#include <span>

#include "subweibull/distribution.hpp"

namespace subweibull {

/// Random vector with iid coordinates drawn from `coordinate`, measured in |.|_p.
struct VectorModel {
  DistributionSpec coordinate = DistributionSpec::exponential();
  long n = 1;
  double p = 1.0;
  bool iid = true;

  // n >= 1 and p >= 1; throws ParameterError otherwise.
  void validate() const;
  // Dimension-free bound needs p >= 2 and equal p-th moments.
  bool dimension_free_applicable() const { return p >= 2.0 && iid; }
};

// P(|X| >= t) <= c exp(-(t/C)^p).
struct TailBoundParams {
  double c = 1.0;
  double C = 1.0;
  double p = 1.0;

  double operator()(double t) const;
};

// (sum |x_i|^p)^{1/p}, rescaled by max |x_i| and summed with compensation.
double lp_norm(std::span<const double> x, double p);

// n^{1/(2p)} C^{1/p} K_p.
double prop13_bound(long n, double p, double K_p, double C);

// 6^{1/p} C (K_p / ||X_1||_{L^p})^{p-1} K_p; independent of n. Requires p >= 2
// and K_p >= ||X_1||_{L^p}.
double thm14_bound(double p, double K_p, double lp_norm_x1, double C);

// 2 exp(-(t/norm)^p), unclamped.
double psi_tail_bound(double norm, double p, double t);

inline double clamp_probability(double bound) { return bound < 1.0 ? bound : 1.0; }

// Tail of | |X|_p - n^{1/p} ||X_1||_{L^p} | from the dimension-free proof:
// 2 exp(-(||X_1||_{L^p}^{p-1} t / (2^{1/p} C K_p^p))^p).
double thm14_tail_bound(double p, double K_p, double lp_norm_x1, double C, double t);

// Deviation bound for f(X) when f is lip-Lipschitz in |.|_p.
double lipschitz_bound(double lip, double deviation_norm);

// |a - b| >= |a^{1/p} - b^{1/p}|^p for a, b >= 0, p >= 1.
bool lemma_concavity(double a, double b, double p);
// |x - 1| >= delta implies |x^p - 1| >= max{delta, delta^p}, for x, delta >= 0, p >= 1.
bool lemma_xalfa(double x, double delta, double p);
// phi_1(max{gamma, gamma^p}) >= gamma^p / 2 for gamma >= 0, p >= 2.
bool lemma_phi1_power(double gamma, double p);
// phi_1(u) >= min{u^2, u} / 2 for u >= 0.
bool phi1_min_inequality(double u);

}  // namespace subweibull
