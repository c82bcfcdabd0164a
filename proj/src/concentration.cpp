#include "subweibull/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "subweibull/error.hpp"
#include "subweibull/tau.hpp"

namespace subweibull {

namespace {

constexpr double kSlack = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

void VectorModel::validate() const {
  require(n >= 1, "vector dimension n must be >= 1");
  require(std::isfinite(p) && p >= 1.0, "norm exponent p must be >= 1");
}

double TailBoundParams::operator()(double t) const { return c * std::exp(-std::pow(t / C, p)); }

double lp_norm(std::span<const double> x, double p) {
  require(p >= 1.0, "lp_norm needs p >= 1");
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  // Neumaier summation of (|x_i| / scale)^p.
  double sum = 0.0, comp = 0.0;
  for (double v : x) {
    const double r = std::abs(v) / scale;
    const double term = p == 1.0 ? r : p == 2.0 ? r * r : std::pow(r, p);
    const double s = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  return scale * std::pow(sum + comp, 1.0 / p);
}

double prop13_bound(long n, double p, double K_p, double C) {
  require(n >= 1, "n must be >= 1");
  require(p >= 1.0, "p must be >= 1");
  require(C > 0.0, "C must be > 0");
  return std::pow(static_cast<double>(n), 1.0 / (2.0 * p)) * std::pow(C, 1.0 / p) * K_p;
}

double thm14_bound(double p, double K_p, double lp_norm_x1, double C) {
  require(p >= 2.0, "dimension-free bound needs p >= 2");
  require(lp_norm_x1 > 0.0, "||X_1||_{L^p} must be > 0");
  if (K_p < lp_norm_x1 * (1.0 - kSlack)) {
    throw ParameterError("K_p must dominate ||X_1||_{L^p}");
  }
  return std::pow(6.0, 1.0 / p) * C * std::pow(K_p / lp_norm_x1, p - 1.0) * K_p;
}

double psi_tail_bound(double norm, double p, double t) {
  require(norm > 0.0, "norm must be > 0");
  require(t >= 0.0, "t must be >= 0");
  return 2.0 * std::exp(-std::pow(t / norm, p));
}

double thm14_tail_bound(double p, double K_p, double lp_norm_x1, double C, double t) {
  const double scale = std::pow(2.0, 1.0 / p) * C * std::pow(K_p, p);
  return 2.0 * std::exp(-std::pow(std::pow(lp_norm_x1, p - 1.0) * t / scale, p));
}

double lipschitz_bound(double lip, double deviation_norm) {
  require(lip >= 0.0 && deviation_norm >= 0.0, "Lipschitz bound needs nonnegative inputs");
  return lip * deviation_norm;
}

bool lemma_concavity(double a, double b, double p) {
  const double lhs = std::abs(a - b);
  const double rhs = std::pow(std::abs(std::pow(a, 1.0 / p) - std::pow(b, 1.0 / p)), p);
  return lhs >= rhs - kSlack;
}

bool lemma_xalfa(double x, double delta, double p) {
  if (std::abs(x - 1.0) < delta) return true;
  return std::abs(std::pow(x, p) - 1.0) >= std::max(delta, std::pow(delta, p)) - kSlack;
}

bool lemma_phi1_power(double gamma, double p) {
  const double gp = std::pow(gamma, p);
  return phi1(std::max(gamma, gp)) >= 0.5 * gp - kSlack;
}

bool phi1_min_inequality(double u) { return phi1(u) >= 0.5 * std::min(u * u, u) - kSlack; }

}  // namespace subweibull
