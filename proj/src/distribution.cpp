#include "subweibull/distribution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "subweibull/error.hpp"

namespace subweibull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ParameterError(std::string(what) + " must be finite and > 0, got " +
                         std::to_string(value));
  }
}

// Density at the origin of a law whose density behaves like c * x^(a-1) near 0.
double origin_density(double a, double c) {
  if (a < 1.0) return kInf;
  if (a == 1.0) return c;
  return 0.0;
}

double half_gauss_density(double p, double theta, double y) {
  const double c = p / (theta * std::sqrt(2.0 * std::numbers::pi));
  if (y == 0.0) return origin_density(p / 2.0, c);
  const double r = y / theta;
  return c * std::pow(r, p / 2.0 - 1.0) * std::exp(-std::pow(r, p) / 2.0);
}

}  // namespace

double Representation::to_x(double u) const {
  return power == 1.0 ? scale * u : scale * std::pow(u, power);
}

double Representation::to_u(double x) const {
  return power == 1.0 ? x / scale : std::pow(x / scale, 1.0 / power);
}

DistributionSpec DistributionSpec::exponential() { return {Family::exponential, 1.0, 1.0}; }

DistributionSpec DistributionSpec::weibull(double shape, double scale) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  return {Family::weibull, shape, scale};
}

DistributionSpec DistributionSpec::pnormal(double p) {
  require_positive(p, "pnormal p");
  return {Family::pnormal, p, 1.0};
}

DistributionSpec DistributionSpec::halfgauss_pow(double p, double scale) {
  require_positive(p, "halfgauss_pow p");
  require_positive(scale, "halfgauss_pow scale");
  return {Family::halfgauss_pow, p, scale};
}

std::string DistributionSpec::name() const {
  switch (family_) {
    case Family::exponential: return "exp";
    case Family::weibull: return "weibull";
    case Family::pnormal: return "pnormal";
    case Family::halfgauss_pow: return "halfgauss_pow";
  }
  return "?";
}

Representation DistributionSpec::representation() const {
  switch (family_) {
    case Family::exponential: return {BaseLaw::exponential, 1.0, 1.0, false};
    case Family::weibull: return {BaseLaw::exponential, scale_, 1.0 / shape_, false};
    case Family::pnormal: return {BaseLaw::half_normal, 1.0, 2.0 / shape_, true};
    case Family::halfgauss_pow: return {BaseLaw::half_normal, scale_, 2.0 / shape_, false};
  }
  return {BaseLaw::exponential, 1.0, 1.0, false};
}

double DistributionSpec::density(double x) const {
  switch (family_) {
    case Family::exponential:
      return x < 0.0 ? 0.0 : std::exp(-x);
    case Family::weibull: {
      if (x < 0.0) return 0.0;
      const double k = shape_;
      if (x == 0.0) return origin_density(k, 1.0 / scale_);
      const double r = x / scale_;
      return (k / scale_) * std::pow(r, k - 1.0) * std::exp(-std::pow(r, k));
    }
    case Family::pnormal:
      // Half of the |X| density, mirrored.
      return 0.5 * half_gauss_density(shape_, 1.0, std::abs(x));
    case Family::halfgauss_pow:
      return x < 0.0 ? 0.0 : half_gauss_density(shape_, scale_, x);
  }
  return 0.0;
}

double DistributionSpec::tail(double t) const {
  if (t <= 0.0) return 1.0;
  switch (family_) {
    case Family::exponential: return std::exp(-t);
    case Family::weibull: return std::exp(-std::pow(t / scale_, shape_));
    case Family::pnormal:
    case Family::halfgauss_pow:
      return std::erfc(std::pow(t / scale_, shape_ / 2.0) / std::numbers::sqrt2);
  }
  return 0.0;
}

double gaussian_abs_moment(double beta) {
  return std::pow(2.0, beta / 2.0) * std::tgamma((beta + 1.0) / 2.0) /
         std::sqrt(std::numbers::pi);
}

double DistributionSpec::abs_moment(double alpha) const {
  require_positive(alpha, "moment order");
  switch (family_) {
    case Family::exponential: return std::tgamma(alpha + 1.0);
    case Family::weibull: return std::pow(scale_, alpha) * std::tgamma(1.0 + alpha / shape_);
    case Family::pnormal:
    case Family::halfgauss_pow:
      return std::pow(scale_, alpha) * gaussian_abs_moment(2.0 * alpha / shape_);
  }
  return 0.0;
}

double DistributionSpec::mean() const {
  return family_ == Family::pnormal ? 0.0 : abs_moment(1.0);
}

double DistributionSpec::decay_coef() const {
  switch (family_) {
    case Family::exponential: return 1.0;
    case Family::weibull: return std::pow(scale_, -shape_);
    case Family::pnormal:
    case Family::halfgauss_pow: return 0.5 * std::pow(scale_, -shape_);
  }
  return 0.0;
}

std::optional<double> DistributionSpec::mgf(MgfTransform transform, double power, double t) const {
  // Exponential-type: E exp(t a E) = 1/(1 - a t), E ~ Exp(1).
  auto exp_type = [t](double a) { return a * t < 1.0 ? 1.0 / (1.0 - a * t) : kInf; };
  // Chi-square-type: E exp(t a G^2) = (1 - 2 a t)^{-1/2}.
  auto chi2_type = [t](double a) {
    return 2.0 * a * t < 1.0 ? 1.0 / std::sqrt(1.0 - 2.0 * a * t) : kInf;
  };

  if (transform == MgfTransform::identity) {
    if (family_ == Family::exponential) return exp_type(1.0);
    if (family_ == Family::weibull && shape_ == 1.0) return exp_type(scale_);
    if (family_ == Family::pnormal && shape_ == 2.0) return std::exp(t * t / 2.0);
    return std::nullopt;
  }
  if (power != shape_) return std::nullopt;
  const double a = std::pow(scale_, shape_);
  switch (family_) {
    case Family::exponential:
    case Family::weibull: return exp_type(a);
    case Family::pnormal:
    case Family::halfgauss_pow: return chi2_type(a);
  }
  return std::nullopt;
}

double DistributionSpec::draw(RandomStream& stream) const {
  const Representation rep = representation();
  if (rep.base == BaseLaw::exponential) {
    return rep.to_x(-std::log(stream.next_uniform()));
  }
  // Box-Muller: |G1| = R |cos(2 pi U2)|, and sign(G2) = sign(sin(2 pi U2)) is a
  // fair sign independent of G1.
  const auto [u1, u2] = stream.next_pair();
  const double g = std::sqrt(-2.0 * std::log(u1)) * std::abs(std::cos(2.0 * std::numbers::pi * u2));
  const double x = rep.to_x(g);
  return (rep.symmetric && u2 >= 0.5) ? -x : x;
}

std::vector<double> sample(const DistributionSpec& spec, RandomStream& stream, std::size_t count) {
  if (count < 1) throw ParameterError("sample count must be >= 1");
  std::vector<double> out(count);
  for (auto& x : out) x = spec.draw(stream);
  return out;
}

}  // namespace subweibull
