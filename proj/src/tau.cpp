#include "subweibull/tau.hpp"

#include <algorithm>
#include <cmath>

#include "subweibull/bisection.hpp"
#include "subweibull/error.hpp"

namespace subweibull {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdge = 1e-12;

// Maximum of e over [-1/K, 1/K]: uniform grid, then Newton steps on e' = 0
// from the grid argmax using central differences of e.
template <class Excess>
double sup_on_interval(Excess&& e, double K, const TauOptions& options) {
  const double half = 1.0 / K;
  double best = -kInf;
  double best_t = 0.0;
  for (int i = 0; i <= options.grid; ++i) {
    const double t = -half + 2.0 * half * i / options.grid;
    const double v = e(t);
    if (std::isnan(v) || v == kInf) return kInf;
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const double h = 1e-4 * half;
  double t = best_t;
  for (int step = 0; step < options.newton_steps; ++step) {
    const double lo = std::max(-half, t - h);
    const double hi = std::min(half, t + h);
    const double mid = 0.5 * (lo + hi);
    const double w = 0.5 * (hi - lo);
    const double f_lo = e(lo), f_mid = e(mid), f_hi = e(hi);
    const double slope = (f_hi - f_lo) / (2.0 * w);
    const double curv = (f_hi - 2.0 * f_mid + f_lo) / (w * w);
    // Only a concave local model has an interior maximum.
    if (!(curv < 0.0)) break;
    t = std::clamp(mid - slope / curv, -half, half);
    best = std::max(best, e(t));
  }
  return best;
}

template <class Excess>
TauNormResult solve_tau(const Cumulant& cumulant, Excess&& excess, const TauOptions& options) {
  auto feasible = [&](double K) { return excess(K) <= 1e-12 * std::max(1.0, K * K); };
  Bracket bracket = expand_upward(feasible, 0.0, 1.0, options.max_K);
  bracket = bisect_threshold(feasible, bracket.lo, bracket.hi, options.tol);

  TauNormResult result;
  result.value = bracket.hi;
  const int m = std::max(2, options.profile_points);
  result.margin_profile.reserve(m);
  for (int i = 0; i < m; ++i) {
    const double s = -1.0 + 2.0 * i / (m - 1);
    const double t = s / result.value;
    result.margin_profile.emplace_back(t, phi_inf(s) - cumulant(t));
  }
  return result;
}

}  // namespace

double phi1(double x) {
  const double a = std::abs(x);
  return a <= 1.0 ? 0.5 * a * a : a - 0.5;
}

double phi_inf(double x) {
  const double a = std::abs(x);
  return a <= 1.0 ? 0.5 * a * a : kInf;
}

bool Cumulant::in_domain(double t) const { return t > lower + kEdge && t < upper - kEdge; }

double Cumulant::operator()(double t) const { return in_domain(t) ? value(t) : kInf; }

double Cumulant::curvature(double t) const { return in_domain(t) ? d2(t) : kInf; }

Cumulant Cumulant::exp_centered() {
  return Cumulant{[](double t) { return -t - std::log1p(-t); },
                  [](double t) { return -1.0 + 1.0 / (1.0 - t); },
                  [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); }, -kInf, 1.0};
}

Cumulant Cumulant::gaussian(double sigma) {
  const double v = sigma * sigma;
  return Cumulant{[v](double t) { return 0.5 * v * t * t; }, [v](double t) { return v * t; },
                  [v](double) { return v; }};
}

Cumulant Cumulant::scaled(double a) const {
  if (a == 0.0) throw ParameterError("cumulant scale must be nonzero");
  Cumulant c = *this;
  c.value = [f = value, a](double t) { return f(a * t); };
  c.d1 = [f = d1, a](double t) { return a * f(a * t); };
  c.d2 = [f = d2, a](double t) { return a * a * f(a * t); };
  const double l = lower / a, u = upper / a;
  c.lower = std::min(l, u);
  c.upper = std::max(l, u);
  return c;
}

Cumulant Cumulant::times(double n) const {
  Cumulant c = *this;
  c.value = [f = value, n](double t) { return n * f(t); };
  c.d1 = [f = d1, n](double t) { return n * f(t); };
  c.d2 = [f = d2, n](double t) { return n * f(t); };
  return c;
}

Cumulant Cumulant::operator+(const Cumulant& other) const {
  Cumulant c;
  c.value = [f = value, g = other.value](double t) { return f(t) + g(t); };
  c.d1 = [f = d1, g = other.d1](double t) { return f(t) + g(t); };
  c.d2 = [f = d2, g = other.d2](double t) { return f(t) + g(t); };
  c.lower = std::max(lower, other.lower);
  c.upper = std::min(upper, other.upper);
  return c;
}

Cumulant centered_cumulant(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::exponential: return Cumulant::exp_centered();
    case Family::weibull:
      if (spec.shape() == 1.0) return Cumulant::exp_centered().scaled(spec.scale());
      break;
    case Family::pnormal:
      if (spec.shape() == 2.0) return Cumulant::gaussian(1.0);
      break;
    case Family::halfgauss_pow: break;
  }
  throw NoClosedFormError("no closed-form centered cumulant for " + spec.name());
}

double curvature_excess(const Cumulant& cumulant, double K, const TauOptions& options) {
  if (!(K > 0.0)) return kInf;
  const double half = 1.0 / K;
  if (!cumulant.in_domain(half) || !cumulant.in_domain(-half)) return kInf;
  const double k2 = K * K;
  return sup_on_interval([&](double t) { return cumulant.curvature(t) - k2; }, K, options);
}

double pointwise_excess(const Cumulant& cumulant, double K, const TauOptions& options) {
  if (!(K > 0.0)) return kInf;
  const double half = 1.0 / K;
  if (!cumulant.in_domain(half) || !cumulant.in_domain(-half)) return kInf;
  const double k2 = K * K;
  return sup_on_interval([&](double t) { return cumulant(t) - 0.5 * k2 * t * t; }, K, options);
}

TauNormResult tau_norm(const Cumulant& cumulant, const TauOptions& options) {
  return solve_tau(
      cumulant, [&](double K) { return curvature_excess(cumulant, K, options); }, options);
}

TauNormResult tau_norm_pointwise(const Cumulant& cumulant, const TauOptions& options) {
  return solve_tau(
      cumulant, [&](double K) { return pointwise_excess(cumulant, K, options); }, options);
}

double convex_conjugate(const std::function<double(double)>& f, double t, double search_bound) {
  if (!(search_bound > 0.0)) throw ParameterError("search_bound must be > 0");
  // By evenness the supremum is attained at u with the sign of t.
  const double slope = std::abs(t);

  // Effective domain [0, D] of f.
  double domain = search_bound;
  if (!std::isfinite(f(search_bound))) {
    double lo = 0.0, hi = search_bound;
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (std::isfinite(f(mid))) lo = mid;
      else hi = mid;
    }
    domain = lo;
  }

  auto objective = [&](double u) { return slope * u - f(u); };
  // Golden-section search on the concave objective.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = domain;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-13 * std::max(1.0, domain)) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    }
  }
  const double u_star = 0.5 * (a + b);
  const double at_edge = objective(domain);
  const double best = std::max({objective(u_star), at_edge, objective(0.0)});

  if (domain == search_bound && u_star >= search_bound * (1.0 - 1e-9) &&
      at_edge > objective(search_bound * (1.0 - 1e-6))) {
    throw UnboundedSupError("conjugate supremum still increasing at search_bound " +
                            std::to_string(search_bound));
  }
  return best;
}

NormPair rotation_invariance_check(std::span<const DistributionSpec> specs,
                                   const TauOptions& options) {
  if (specs.empty()) throw ParameterError("rotation invariance needs at least one variable");
  Cumulant sum = centered_cumulant(specs.front());
  double squares = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Cumulant c = centered_cumulant(specs[i]);
    if (i > 0) sum = sum + c;
    const double tau_i = tau_norm(c, options).value;
    squares += tau_i * tau_i;
  }
  return {tau_norm(sum, options).value, std::sqrt(squares)};
}

BernsteinBound bernstein_bound(long n, double t, double K, double C1) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (!(t >= 0.0)) throw ParameterError("t must be >= 0");
  if (!(K > 0.0)) throw ParameterError("K must be > 0");
  if (!(C1 >= 1.0)) throw ParameterError("C1 must be >= 1");
  const double u = t / (2.0 * C1 * K);
  const double nd = static_cast<double>(n);
  return {2.0 * std::exp(-nd * phi1(u)), 2.0 * std::exp(-0.5 * nd * std::min(u * u, u))};
}

}  // namespace subweibull
