#pragma once

#include <limits>
#include <span>
#include <string>

#include "subweibull/distribution.hpp"

namespace subweibull {

enum class NormMethod { analytic, quadrature, empirical };

std::string to_string(NormMethod method);

/// Value of a psi_p quasi-norm, ||X||_psi_p = inf{K > 0 : E exp(|X/K|^p) <= 2}.
struct OrliczNormResult {
  double value = 0.0;
  double p = 0.0;
  NormMethod method = NormMethod::analytic;
  double lo = 0.0;
  double hi = 0.0;
  // |E exp(|X/K|^p) - 2| at K = value.
  double residual = 0.0;
};

// The three constants of the psi_p characterization: the Orlicz condition (K),
// the tail condition (L) and the moment condition (M).
struct EquivalenceConstants {
  double K = 0.0;
  double L = 0.0;
  double M = 0.0;
  double p = 0.0;
};

// The law of |scale| * |X - shift|^power, for norms of derived variables.
struct Pushforward {
  double scale = 1.0;
  double shift = 0.0;
  double power = 1.0;
};

struct NormOptions {
  double tol = 1e-8;      // relative bracket width
  double lo_start = 1e-6;  // quadrature mode lower bracket
  double max_K = 1e12;
};

// Phi(K) = E exp(|Y/K|^p) for Y the pushforward of X. +infinity on divergence
// or when Phi exceeds cap.
double orlicz_functional(const DistributionSpec& spec, double p, double K,
                         const Pushforward& push = {},
                         double cap = std::numeric_limits<double>::infinity());

// Closed forms: Exp and Weibull(p, theta) give theta 2^{1/p}; PNormal(p) and
// HalfGaussianPower(p, theta) give theta (8/3)^{1/p}. Only for p equal to the
// family's shape exponent; throws NoClosedFormError otherwise.
OrliczNormResult psi_norm_analytic(const DistributionSpec& spec, double p);

OrliczNormResult psi_norm_quadrature(const DistributionSpec& spec, double p,
                                     const NormOptions& options = {},
                                     const Pushforward& push = {});

// Sample analogue: smallest K with (1/N) sum exp(|x_i/K|^p) <= 2. Biased low
// for small N (unobserved tail). Requires at least 100 samples.
OrliczNormResult psi_norm_empirical(std::span<const double> samples, double p, double tol = 1e-8);

struct NormPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = || |X|^p ||_psi_r by quadrature, rhs = ||X||_psi_{pr}^p (closed form when
// available). The two agree exactly in theory.
NormPair power_norm_identity(const DistributionSpec& spec, double p, double r,
                             const NormOptions& options = {});

// Certifies the tail condition with L = K against the exact tail and the
// moment condition on an alpha grid. Throws VerificationError on any violated
// grid point and ParameterError when K is below the psi_p norm.
EquivalenceConstants check_equivalence(const DistributionSpec& spec, double p, double K);

struct CenteringCheck {
  double lhs = 0.0;        // ||X - EX||_psi_p
  double rhs = 0.0;        // 2 ||X||_psi_p
  double mean_norm = 0.0;  // ||EX||_psi_p = |EX| / (ln 2)^{1/p}
  double norm = 0.0;       // ||X||_psi_p

  bool holds(double tol) const { return lhs <= rhs + tol && mean_norm <= norm + tol; }
};

CenteringCheck centering_bound_check(const DistributionSpec& spec, double p,
                                     const NormOptions& options = {});

}  // namespace subweibull
