#pragma once

#include <functional>
#include <limits>
#include <span>

#include "subweibull/distribution.hpp"

namespace subweibull {

// Leading-order growth of an exponent h(x) ~ coef * |x|^power as |x| -> infinity.
// `exact` means h(x) equals coef * |x|^power for large |x| with no lower-order
// terms; an exact tie with the density's decay is then a certain divergence.
struct Growth {
  double coef = 0.0;
  double power = 0.0;
  bool exact = true;
};

struct QuadratureOptions {
  double rel_tol = 1e-13;
  // Integration stops and returns +infinity as soon as the partial integral
  // exceeds this (the integrand is nonnegative).
  double cap = std::numeric_limits<double>::infinity();
};

// Divergence decided from the leading order alone: +1 divergent, -1 convergent,
// 0 undecided (a tie with lower-order terms present).
int classify_divergence(const DistributionSpec& spec, const Growth& growth);

/// E exp(h(X)) over the law of `spec`.
///
/// The integral is taken in the base variable u of the law's representation
/// (x = scale * u^power), which turns the p < 2 origin singularities of the
/// p-normal densities into the smooth half-normal weight. The half-line is
/// covered by [0, T] with T doubled until the last piece is negligible.
/// Returns +infinity on divergence or when the partial integral exceeds
/// `options.cap`. `x_breaks` lists points where h is not smooth.
double expect_exp(const DistributionSpec& spec, const std::function<double(double)>& h,
                  const Growth& growth, std::span<const double> x_breaks = {},
                  const QuadratureOptions& options = {});

// E g(X) for g of at most polynomial growth.
double expect(const DistributionSpec& spec, const std::function<double(double)>& g,
              std::span<const double> x_breaks = {}, const QuadratureOptions& options = {});

// Integral of a density over its support by the same machinery (should be 1).
double total_mass(const DistributionSpec& spec);

}  // namespace subweibull
