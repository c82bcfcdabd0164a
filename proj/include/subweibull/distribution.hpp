#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "subweibull/random.hpp"

namespace subweibull {

enum class Family { exponential, weibull, pnormal, halfgauss_pow };

// Base laws every family is pushed forward from.
enum class BaseLaw {
  exponential,  // u ~ Exp(1), density e^{-u}
  half_normal,  // u = |G|, density 2 phi(u)
};

// X = sign * scale * u^power with u drawn from `base`; sign is a fair
// independent +-1 when `symmetric`, otherwise +1.
struct Representation {
  BaseLaw base;
  double scale;
  double power;
  bool symmetric;

  double to_x(double u) const;
  // Inverse of to_x on the positive branch.
  double to_u(double x) const;
};

enum class MgfTransform { identity, abs_pow };

/// Parametric description of a scalar p-sub-exponential law.
///
/// Parameters are validated on construction; every instance is valid.
class DistributionSpec {
 public:
  static DistributionSpec exponential();
  static DistributionSpec weibull(double shape, double scale);
  static DistributionSpec pnormal(double p);
  static DistributionSpec halfgauss_pow(double p, double scale);

  Family family() const { return family_; }
  // Shape exponent: Weibull shape, p of the p-normal families, 1 for Exp.
  double shape() const { return shape_; }
  double scale() const { return scale_; }
  std::string name() const;

  Representation representation() const;

  double density(double x) const;
  // P(|X| >= t) for t >= 0, exact.
  double tail(double t) const;
  // E|X|^alpha, alpha > 0.
  double abs_moment(double alpha) const;
  double mean() const;
  // log f(x) ~ -decay_coef * |x|^decay_power as |x| -> infinity.
  double decay_coef() const;
  double decay_power() const { return shape_; }

  // Closed-form MGF of X (identity) or |X|^power (abs_pow). nullopt when no
  // closed form is known; +infinity outside the domain of convergence.
  std::optional<double> mgf(MgfTransform transform, double power, double t) const;

  double draw(RandomStream& stream) const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(Family family, double shape, double scale)
      : family_(family), shape_(shape), scale_(scale) {}

  Family family_;
  double shape_;
  double scale_;
};

std::vector<double> sample(const DistributionSpec& spec, RandomStream& stream, std::size_t count);

inline double density(const DistributionSpec& spec, double x) { return spec.density(x); }

inline std::optional<double> mgf(const DistributionSpec& spec, MgfTransform transform, double power,
                                 double t) {
  return spec.mgf(transform, power, t);
}

// E|G|^beta for G standard normal.
double gaussian_abs_moment(double beta);

}  // namespace subweibull
