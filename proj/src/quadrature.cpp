#include "subweibull/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace subweibull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDoublings = 1100;
constexpr unsigned kMaxDepth = 15;

struct BaseDecay {
  double coef;
  double power;
  // Beyond this u the base weight alone is below ~1e-17.
  double u_min;
};

BaseDecay base_decay(BaseLaw base) {
  if (base == BaseLaw::exponential) return {1.0, 1.0, 40.0};
  return {0.5, 2.0, 9.0};
}

double log_base_weight(BaseLaw base, double u) {
  if (base == BaseLaw::exponential) return -u;
  static const double log_norm = std::log(2.0 / std::sqrt(2.0 * std::numbers::pi));
  return log_norm - 0.5 * u * u;
}

template <class F>
double gk(F&& f, double a, double b, double rel_tol) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, rel_tol,
                                                                       &error);
}

// Integral of f over [0, infinity) given interior break points (sorted, > 0).
template <class F>
double integrate_half_line(F&& f, std::vector<double> breaks, double u_min,
                           const QuadratureOptions& options) {
  double total = 0.0;
  double a = 0.0;
  for (double b : breaks) {
    total += gk(f, a, b, options.rel_tol);
    if (!std::isfinite(total) || total > options.cap) return kInf;
    a = b;
  }
  double b = std::max(1.0, 2.0 * a);
  for (int i = 0; i < kMaxDoublings; ++i) {
    const double piece = gk(f, a, b, options.rel_tol);
    total += piece;
    if (!std::isfinite(total) || total > options.cap) return kInf;
    if (b >= u_min && std::abs(piece) <= 1e-16 * std::abs(total)) return total;
    a = b;
    b *= 2.0;
  }
  return kInf;
}

std::vector<double> u_breaks(const Representation& rep, std::span<const double> x_breaks) {
  std::vector<double> out;
  for (double x : x_breaks) {
    if (x > 0.0) out.push_back(rep.to_u(x));
    else if (x < 0.0 && rep.symmetric) out.push_back(rep.to_u(-x));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

int classify_divergence(const DistributionSpec& spec, const Growth& growth) {
  if (!(growth.coef > 0.0)) return -1;
  const Representation rep = spec.representation();
  const BaseDecay decay = base_decay(rep.base);
  // h(x(u)) ~ coef * scale^power * u^(rep.power * power)
  const double u_power = rep.power * growth.power;
  const double u_coef = growth.coef * std::pow(rep.scale, growth.power);
  const double power_gap = u_power - decay.power;
  if (power_gap > 1e-12) return 1;
  if (power_gap < -1e-12) return -1;
  const double coef_gap = (u_coef - decay.coef) / decay.coef;
  if (coef_gap > 1e-14) return 1;
  if (coef_gap < -1e-14) return -1;
  return growth.exact ? 1 : 0;
}

double expect_exp(const DistributionSpec& spec, const std::function<double(double)>& h,
                  const Growth& growth, std::span<const double> x_breaks,
                  const QuadratureOptions& options) {
  if (classify_divergence(spec, growth) > 0) return kInf;
  const Representation rep = spec.representation();
  auto integrand = [&](double u) {
    const double lw = log_base_weight(rep.base, u);
    const double x = rep.to_x(u);
    if (rep.symmetric) return 0.5 * (std::exp(h(x) + lw) + std::exp(h(-x) + lw));
    return std::exp(h(x) + lw);
  };
  return integrate_half_line(integrand, u_breaks(rep, x_breaks), base_decay(rep.base).u_min,
                             options);
}

double expect(const DistributionSpec& spec, const std::function<double(double)>& g,
              std::span<const double> x_breaks, const QuadratureOptions& options) {
  const Representation rep = spec.representation();
  auto integrand = [&](double u) {
    const double w = std::exp(log_base_weight(rep.base, u));
    const double x = rep.to_x(u);
    if (rep.symmetric) return 0.5 * w * (g(x) + g(-x));
    return w * g(x);
  };
  return integrate_half_line(integrand, u_breaks(rep, x_breaks), base_decay(rep.base).u_min,
                             options);
}

double total_mass(const DistributionSpec& spec) {
  // Integrates the density function itself through x = scale * u^power.
  const Representation rep = spec.representation();
  auto integrand = [&](double u) {
    const double x = rep.to_x(u);
    const double jacobian = rep.scale * rep.power * std::pow(u, rep.power - 1.0);
    const double mass = rep.symmetric ? spec.density(x) + spec.density(-x) : spec.density(x);
    return mass == 0.0 ? 0.0 : mass * jacobian;
  };
  return integrate_half_line(integrand, {}, base_decay(rep.base).u_min, QuadratureOptions{});
}

}  // namespace subweibull
