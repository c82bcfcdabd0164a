#include "subweibull/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

#include "subweibull/concentration.hpp"
#include "subweibull/distribution.hpp"
#include "subweibull/experiment.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/quadrature.hpp"
#include "subweibull/random.hpp"
#include "subweibull/serialization.hpp"
#include "subweibull/tau.hpp"

namespace subweibull {

namespace {

// A check returns an empty string on success, otherwise the failure detail.
using Check = std::function<std::string()>;

template <class... Args>
std::string msg(Args&&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

std::vector<DistributionSpec> sample_families() {
  return {DistributionSpec::exponential(),      DistributionSpec::weibull(0.5, 1.0),
          DistributionSpec::weibull(1.5, 2.0),  DistributionSpec::weibull(3.0, 0.7),
          DistributionSpec::pnormal(1.0),       DistributionSpec::pnormal(2.0),
          DistributionSpec::pnormal(3.0),       DistributionSpec::pnormal(0.6),
          DistributionSpec::halfgauss_pow(1.0, 1.5), DistributionSpec::halfgauss_pow(4.0, 0.5)};
}

std::string label(const DistributionSpec& s) { return to_json(s).dump(); }

// ---- dist ----

std::string density_mass() {
  for (const auto& spec : sample_families()) {
    const double mass = total_mass(spec);
    if (std::abs(mass - 1.0) > 1e-8) return msg(label(spec), " integrates to ", mass);
  }
  return {};
}

std::string weibull_identity(std::uint64_t seed) {
  constexpr std::size_t kN = 100000;
  const double shape = 1.7, scale = 1.3;
  RandomStream a(seed, 1), b(seed, 2);
  const auto weibull = sample(DistributionSpec::weibull(shape, scale), a, kN);
  auto exps = sample(DistributionSpec::exponential(), b, kN);
  for (auto& e : exps) e = scale * std::pow(e, 1.0 / shape);
  const double d = ks_statistic(weibull, exps);
  const double crit = ks_critical_001(kN, kN);
  return d < crit ? std::string() : msg("KS statistic ", d, " >= ", crit);
}

std::string exp_mgf() {
  const auto spec = DistributionSpec::exponential();
  for (double t : {1.0, 1.5, 10.0}) {
    if (!std::isinf(*spec.mgf(MgfTransform::identity, 1.0, t))) return msg("finite mgf at t=", t);
  }
  for (double t : {-1.0, 0.0, 0.5, 0.9}) {
    const double closed = *spec.mgf(MgfTransform::identity, 1.0, t);
    if (!std::isfinite(closed)) return msg("infinite mgf at t=", t);
    const double quad = expect_exp(spec, [t](double x) { return t * x; }, Growth{t, 1.0, true});
    if (std::abs(quad - closed) > 1e-8 * closed) return msg("t=", t, ": ", quad, " vs ", closed);
  }
  return {};
}

std::string pnormal_symmetry(std::uint64_t seed) {
  constexpr std::size_t kN = 50000;
  const auto spec = DistributionSpec::pnormal(1.5);
  RandomStream a(seed, 3), b(seed, 4);
  const auto x = sample(spec, a, kN);
  auto y = sample(spec, b, kN);
  for (auto& v : y) v = -v;
  const double d = ks_statistic(x, y);
  const double crit = ks_critical_001(kN, kN);
  return d < crit ? std::string() : msg("KS statistic of X against -X ", d, " >= ", crit);
}

// ---- orlicz ----

std::string phi_monotone() {
  for (const auto& spec : sample_families()) {
    const double p = spec.shape();
    double previous = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
      const double K = 0.25 * i;
      const double phi = orlicz_functional(spec, p, K);
      if (phi > previous * (1.0 + 1e-12)) return msg(label(spec), " Phi increases at K=", K);
      previous = phi;
    }
  }
  return {};
}

std::string closed_forms() {
  std::vector<std::pair<DistributionSpec, double>> cases{
      {DistributionSpec::exponential(), 1.0},
      {DistributionSpec::weibull(1.0, 1.0), 1.0},
      {DistributionSpec::weibull(2.0, 1.0), 2.0},
      {DistributionSpec::weibull(3.0, 2.0), 3.0},
      {DistributionSpec::pnormal(1.0), 1.0},
      {DistributionSpec::pnormal(2.0), 2.0},
      {DistributionSpec::pnormal(3.0), 3.0},
      {DistributionSpec::pnormal(4.0), 4.0},
      {DistributionSpec::halfgauss_pow(2.0, 1.5), 2.0}};
  for (const auto& [spec, p] : cases) {
    const double exact = psi_norm_analytic(spec, p).value;
    const double quad = psi_norm_quadrature(spec, p).value;
    if (std::abs(quad - exact) > 1e-6 * exact) return msg(label(spec), ": ", quad, " vs ", exact);
  }
  return {};
}

std::string norm_scaling() {
  const NormOptions opts{1e-9};
  for (const auto& spec : {DistributionSpec::exponential(), DistributionSpec::pnormal(3.0),
                           DistributionSpec::weibull(0.5, 1.0)}) {
    const double p = spec.shape();
    const double base = psi_norm_quadrature(spec, p, opts).value;
    for (double c : {0.5, 3.0, -2.0}) {
      const double scaled = psi_norm_quadrature(spec, p, opts, Pushforward{c, 0.0, 1.0}).value;
      if (std::abs(scaled - std::abs(c) * base) > 4.0 * opts.tol * std::abs(c) * base) {
        return msg(label(spec), " c=", c, ": ", scaled, " vs ", std::abs(c) * base);
      }
    }
    if (!(base > 0.0)) return msg(label(spec), " norm not positive");
  }
  return {};
}

std::string power_identity() {
  struct Case {
    DistributionSpec spec;
    double p, r;
  };
  const Case cases[] = {{DistributionSpec::pnormal(2.0), 2.0, 1.0},
                        {DistributionSpec::exponential(), 2.0, 0.5},
                        {DistributionSpec::weibull(2.0, 1.0), 2.0, 1.0},
                        {DistributionSpec::weibull(1.5, 1.2), 0.5, 2.0},
                        {DistributionSpec::pnormal(3.0), 1.5, 2.0}};
  for (const auto& c : cases) {
    const auto [lhs, rhs] = power_norm_identity(c.spec, c.p, c.r);
    if (std::abs(lhs - rhs) > 1e-6 * rhs) return msg(label(c.spec), ": ", lhs, " vs ", rhs);
  }
  return {};
}

std::string tail_and_moments() {
  for (const auto& spec : sample_families()) {
    const double p = spec.shape();
    const double K = psi_norm_analytic(spec, p).value;
    const auto constants = check_equivalence(spec, p, K);  // throws on any violation
    if (!(constants.M > 0.0 && constants.M <= K * (1.0 + 1e-9))) {
      return msg(label(spec), " M=", constants.M);
    }
  }
  return {};
}

std::string centering() {
  for (const auto& spec : {DistributionSpec::exponential(), DistributionSpec::weibull(2.0, 1.0),
                           DistributionSpec::pnormal(3.0), DistributionSpec::halfgauss_pow(1.0, 1.0)}) {
    const double p = std::max(1.0, spec.shape());
    const auto c = centering_bound_check(spec, p);
    if (!c.holds(1e-7)) return msg(label(spec), ": lhs ", c.lhs, " rhs ", c.rhs);
  }
  return {};
}

// ---- tau ----

std::string conjugacy() {
  for (int i = 0; i < 1000; ++i) {
    const double t = -10.0 + 20.0 * i / 999.0;
    const double got = convex_conjugate(phi_inf, t, 4.0);
    if (std::abs(got - phi1(t)) > 1e-9) return msg("t=", t, ": ", got, " vs ", phi1(t));
  }
  return {};
}

std::string biconjugacy() {
  auto phi1_numeric = [](double u) { return convex_conjugate(phi_inf, u, 4.0); };
  for (int i = 0; i < 41; ++i) {
    const double t = -0.99 + 1.98 * i / 40.0;
    const double got = convex_conjugate(phi1_numeric, t, 50.0);
    if (std::abs(got - phi_inf(t)) > 1e-6) return msg("t=", t, ": ", got);
  }
  return {};
}

std::string tau_domination_and_tightness() {
  const Cumulant c = Cumulant::exp_centered();
  const double K = tau_norm(c).value;
  for (int i = 0; i <= 1000; ++i) {
    const double t = (-1.0 + 2.0 * i / 1000.0) / K;
    if (c(t) > phi_inf(std::clamp(K * t, -1.0, 1.0)) + 1e-12) return msg("domination fails at t=", t);
  }
  if (curvature_excess(c, K * (1.0 - 1e-3)) <= 0.0) return "feasible below the norm";
  return {};
}

std::string tau_scaling() {
  const Cumulant c = Cumulant::exp_centered();
  const double base = tau_norm(c).value;
  for (double a : {0.5, 2.0}) {
    const double scaled = tau_norm(c.scaled(a)).value;
    if (std::abs(scaled - a * base) > 1e-6) return msg("a=", a, ": ", scaled, " vs ", a * base);
  }
  return {};
}

std::string rotation() {
  const std::vector<DistributionSpec> specs(9, DistributionSpec::exponential());
  const auto [lhs, rhs] = rotation_invariance_check(specs);
  if (!(lhs <= rhs + 1e-9)) return msg(lhs, " > ", rhs);
  const std::vector<DistributionSpec> mixed{DistributionSpec::exponential(),
                                            DistributionSpec::weibull(1.0, 3.0),
                                            DistributionSpec::pnormal(2.0)};
  const auto [l2, r2] = rotation_invariance_check(mixed);
  if (!(l2 <= r2 + 1e-9)) return msg("mixed: ", l2, " > ", r2);
  return {};
}

// ---- conc ----

template <class Predicate>
std::string random_property(std::uint64_t seed, std::uint64_t stream, Predicate&& pred) {
  RandomStream s(seed, stream);
  for (int i = 0; i < 100000; ++i) {
    const double u1 = s.next_uniform(), u2 = s.next_uniform(), u3 = s.next_uniform();
    if (!pred(u1, u2, u3)) return msg("counterexample at case ", i);
  }
  return {};
}

std::string moment_domination() {
  for (const auto& spec : sample_families()) {
    const double p = spec.shape();
    const double K = psi_norm_analytic(spec, p).value;
    if (std::pow(K, p) < spec.abs_moment(p)) return msg(label(spec), " K_p^p < E|X|^p");
  }
  return {};
}

std::string lp_subadditive(std::uint64_t seed) {
  RandomStream s(seed, 40);
  for (int i = 0; i < 2000; ++i) {
    const double p = 1.0 + 5.0 * s.next_uniform();
    std::vector<double> x(8), y(8), z(8);
    for (int k = 0; k < 8; ++k) {
      x[k] = 10.0 * (s.next_uniform() - 0.5);
      y[k] = 10.0 * (s.next_uniform() - 0.5);
      z[k] = x[k] + y[k];
    }
    if (lp_norm(z, p) > lp_norm(x, p) + lp_norm(y, p) + 1e-12) return msg("fails at p=", p);
  }
  return {};
}

// ---- mc ----

ExperimentPlan plan_for(const DistributionSpec& spec, long n, double p, const VerifyOptions& o) {
  ExperimentPlan plan;
  plan.model = VectorModel{spec, n, p, true};
  plan.trials = o.mc_trials;
  plan.seed = o.seed;
  plan.constant_grid = ExperimentPlan::default_constant_grid();
  return plan;
}

std::string mc_reproducible(const VerifyOptions& o) {
  auto plan = plan_for(DistributionSpec::pnormal(3.0), 32, 3.0, o);
  plan.trials = 10000;
  plan.t_grid = {0.0, 0.25, 0.5};
  plan.validate();
  ReportOptions one;
  one.bootstrap_resamples = 20;
  one.threads = 1;
  ReportOptions many = one;
  many.threads = 3;
  const auto a = run_experiment(plan, one), b = run_experiment(plan, many);
  const std::string sa = report_csv_row(a) + tail_csv(a), sb = report_csv_row(b) + tail_csv(b);
  return sa == sb ? std::string() : "CSV differs between 1 and 3 workers";
}

std::string mc_tail_monotone(const VerifyOptions& o) {
  auto plan = plan_for(DistributionSpec::exponential(), 50, 1.0, o);
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(i);
  const auto rows = exceedance_rows(sample_deviations(plan, o.threads), grid);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].freq > rows[i - 1].freq) return msg("frequency increases at t=", rows[i].t);
  }
  if (rows.front().freq != 1.0) return "freq(0) != 1";
  return {};
}

std::string mc_slopes(const VerifyOptions& o) {
  const std::vector<double> ns{16, 64, 256, 1024, 4096};
  std::vector<double> exp_norms, gauss_norms;
  for (double n : ns) {
    exp_norms.push_back(
        deviation_norm_estimate(plan_for(DistributionSpec::exponential(), long(n), 1.0, o), o.threads));
    gauss_norms.push_back(
        deviation_norm_estimate(plan_for(DistributionSpec::pnormal(2.0), long(n), 2.0, o), o.threads));
  }
  const double s_exp = loglog_slope(ns, exp_norms), s_gauss = loglog_slope(ns, gauss_norms);
  if (s_exp < 0.4 || s_exp > 0.6) return msg("Exp p=1 slope ", s_exp);
  if (s_gauss < -0.1 || s_gauss > 0.1) return msg("PNormal p=2 slope ", s_gauss);
  return {};
}

// The tail constant is fitted on one seed and checked against fresh trials.
std::string mc_bound_domination(const VerifyOptions& o) {
  for (const auto& [spec, n, p] : {std::tuple{DistributionSpec::pnormal(3.0), 128L, 3.0},
                                   std::tuple{DistributionSpec::exponential(), 100L, 1.0}}) {
    auto plan = plan_for(spec, n, p, o);
    plan.trials = std::max(o.mc_trials, 10000L);
    const double scale = p == 1.0 ? 3.0 * std::sqrt(double(n)) : 1.0;
    for (int i = 0; i < 12; ++i) plan.t_grid.push_back(scale * 0.1 * i);
    ReportOptions ro;
    ro.bootstrap_resamples = 0;
    ro.threads = o.threads;
    const auto fit = run_experiment(plan, ro);
    plan.seed += 1;
    ro.tail_constant = fit.tail_C;
    const auto fresh = run_experiment(plan, ro);
    for (const auto& row : fresh.tail_rows) {
      if (row.freq > row.bound + 3.0 * row.se) {
        return msg(spec.name(), " tail freq ", row.freq, " above bound ", row.bound, " at t=", row.t);
      }
    }
  }
  return {};
}

}  // namespace

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_001(std::size_t n, std::size_t m) {
  const double c = std::sqrt(-0.5 * std::log(1e-3 / 2.0));
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return c * std::sqrt((nd + md) / (nd * md));
}

std::vector<CheckResult> run_verification(const VerifyOptions& o) {
  const std::uint64_t seed = o.seed;
  std::vector<std::tuple<std::string, std::string, Check>> checks{
      {"dist", "density integrates to 1 (1e-8)", density_mass},
      {"dist", "Weibull(p,theta) ~ theta E^{1/p} (KS, 1e-3 level)", [=] { return weibull_identity(seed); }},
      {"dist", "Exp MGF: +inf iff t >= 1, matches quadrature", exp_mgf},
      {"dist", "PNormal sign symmetry", [=] { return pnormal_symmetry(seed); }},
      {"orlicz", "closed-form norms = quadrature (1e-6 rel)", closed_forms},
      {"orlicz", "Phi(K) nonincreasing", phi_monotone},
      {"orlicz", "homogeneity |c| ||X|| and definiteness", norm_scaling},
      {"orlicz", "|| |X|^p ||_psi_r = ||X||^p_psi_pr", power_identity},
      {"orlicz", "tail bound, norm <= 3^{1/p} L, moment condition", tail_and_moments},
      {"orlicz", "||X - EX|| <= 2||X|| and Jensen step", centering},
      {"tau", "conjugate(phi_inf) = phi_1 on 1e3 points (1e-9)", conjugacy},
      {"tau", "biconjugate = phi_inf on |t| < 1 (1e-6)", biconjugacy},
      {"tau", "cumulant domination and tightness", tau_domination_and_tightness},
      {"tau", "tau(C(a.)) = a tau(C)", tau_scaling},
      {"tau", "rotation invariance", rotation},
      {"tau", "phi_1(u) >= min{u^2,u}/2",
       [=] { return random_property(seed, 10, [](double u, double, double) { return phi1_min_inequality(20.0 * u); }); }},
      {"conc", "concavity inequality (1e5 cases)",
       [=] {
         return random_property(seed, 11, [](double a, double b, double c) {
           return lemma_concavity(100.0 * a, 100.0 * b, 1.0 + 7.0 * c);
         });
       }},
      {"conc", "|x-1| >= delta => |x^p-1| >= max{delta,delta^p} (1e5 cases)",
       [=] {
         return random_property(seed, 12, [](double x, double d, double p) {
           return lemma_xalfa(4.0 * x, 3.0 * d, 1.0 + 5.0 * p);
         });
       }},
      {"conc", "phi_1(max{g,g^p}) >= g^p/2 (1e5 cases)",
       [=] {
         return random_property(seed, 13, [](double g, double p, double) {
           return lemma_phi1_power(4.0 * g, 2.0 + 6.0 * p);
         });
       }},
      {"conc", "K_p^p >= E|X|^p", moment_domination},
      {"conc", "lp_norm subadditivity", [=] { return lp_subadditive(seed); }},
  };
  if (o.include_mc) {
    checks.emplace_back("mc", "bitwise reproducible across worker counts", [=] { return mc_reproducible(o); });
    checks.emplace_back("mc", "exceedance frequency nonincreasing in t", [=] { return mc_tail_monotone(o); });
    checks.emplace_back("mc", "log-log growth slopes (Exp ~ 0.5, PNormal(2) ~ 0)", [=] { return mc_slopes(o); });
    checks.emplace_back("mc", "calibrated tail bounds dominate frequencies", [=] { return mc_bound_domination(o); });
  }

  std::vector<CheckResult> results;
  for (auto& [module, name, check] : checks) {
    CheckResult r;
    r.module = module;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace subweibull
