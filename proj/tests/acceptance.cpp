// Acceptance suite: one PASS/FAIL line per criterion, with its runtime limit.
//
// Usage: acceptance [csv-dir]
// When csv-dir is given, the Monte Carlo CSVs of criteria 7 and 8 are written there.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "subweibull/concentration.hpp"
#include "subweibull/distribution.hpp"
#include "subweibull/experiment.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/random.hpp"
#include "subweibull/serialization.hpp"
#include "subweibull/tau.hpp"

using namespace subweibull;

namespace {

constexpr std::uint64_t kSeed = 20240607;
constexpr long kTrials = 100000;
const std::vector<long> kDims{16, 64, 256, 1024, 4096};

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

template <class... Args>
std::string str(Args&&... args) {
  std::ostringstream os;
  os.precision(12);
  (os << ... << args);
  return os.str();
}

// ---- 1-6: deterministic numerics ----

Outcome closed_forms() {
  Outcome o;
  struct Case {
    DistributionSpec spec;
    double p, expected;
  };
  const double e83 = 8.0 / 3.0;
  const Case cases[] = {
      {DistributionSpec::exponential(), 1.0, 2.0},
      {DistributionSpec::weibull(1.0, 1.0), 1.0, 2.0},
      {DistributionSpec::weibull(2.0, 1.0), 2.0, std::sqrt(2.0)},
      {DistributionSpec::weibull(3.0, 2.0), 3.0, 2.0 * std::cbrt(2.0)},
      {DistributionSpec::pnormal(1.0), 1.0, e83},
      {DistributionSpec::pnormal(2.0), 2.0, std::sqrt(e83)},
      {DistributionSpec::pnormal(3.0), 3.0, std::cbrt(e83)},
      {DistributionSpec::pnormal(4.0), 4.0, std::pow(e83, 0.25)},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const double q = psi_norm_quadrature(c.spec, c.p).value;
    const double rel = std::abs(q - c.expected) / c.expected;
    worst = std::max(worst, rel);
    if (rel > 1e-6) o.fail(str(to_json(c.spec).dump(), " p=", c.p, ": ", q, " vs ", c.expected));
  }
  if (o.passed) o.detail = str("8 norms, worst relative error ", worst);
  return o;
}

Outcome tau_values() {
  Outcome o;
  const double k = tau_norm(Cumulant::exp_centered()).value;
  if (std::abs(k - 2.0) > 1e-6) o.fail(str("tau(Exp-1) = ", k));
  double worst = std::abs(k - 2.0);
  for (double n : {1.0, 4.0, 9.0, 100.0}) {
    const double v = tau_norm(Cumulant::exp_centered().times(n)).value;
    worst = std::max(worst, std::abs(v - std::sqrt(n) - 1.0));
    if (std::abs(v - std::sqrt(n) - 1.0) > 1e-4) o.fail(str("n=", n, ": ", v));
  }
  if (o.passed) o.detail = str("tau(Exp-1) = ", k, ", worst abs error ", worst);
  return o;
}

Outcome conjugacy() {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = -10.0 + 20.0 * i / 999.0;
    const double err = std::abs(convex_conjugate(phi_inf, t, 2.0) - phi1(t));
    worst = std::max(worst, err);
    if (err > 1e-9) o.fail(str("t=", t, " error ", err));
  }
  if (o.passed) o.detail = str("1000 points, worst abs error ", worst);
  return o;
}

Outcome lemmas() {
  Outcome o;
  RandomStream s(kSeed, 0);
  long failures[4] = {0, 0, 0, 0};
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_uniform(), v = s.next_uniform(), w = s.next_uniform();
    failures[0] += !lemma_concavity(100.0 * u, 100.0 * v, 1.0 + 9.0 * w);
    failures[1] += !lemma_xalfa(4.0 * u, 3.0 * v, 1.0 + 5.0 * w);
    failures[2] += !lemma_phi1_power(4.0 * u, 2.0 + 6.0 * v);
    failures[3] += !phi1_min_inequality(20.0 * w);
  }
  const char* names[] = {"concavity", "xalfa", "phi1_power", "phi1_min"};
  for (int k = 0; k < 4; ++k) {
    if (failures[k] != 0) o.fail(str(names[k], ": ", failures[k], " failures"));
  }
  if (o.passed) o.detail = "4 x 100000 cases, 0 failures";
  return o;
}

Outcome power_identity() {
  Outcome o;
  struct Case {
    DistributionSpec spec;
    double p, r;
  };
  const Case cases[] = {{DistributionSpec::pnormal(2.0), 2.0, 1.0},
                        {DistributionSpec::exponential(), 2.0, 0.5},
                        {DistributionSpec::weibull(2.0, 1.0), 2.0, 1.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto [lhs, rhs] = power_norm_identity(c.spec, c.p, c.r);
    // combined tolerance: absolute plus relative
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    worst = std::max(worst, err);
    if (err > 1e-5) o.fail(str(to_json(c.spec).dump(), ": ", lhs, " vs ", rhs));
  }
  if (o.passed) o.detail = str("3 cases, worst combined error ", worst);
  return o;
}

Outcome mgf_domination() {
  Outcome o;
  const Cumulant c = Cumulant::exp_centered();
  for (int i = 0; i < 1000; ++i) {
    const double t = -0.5 + i / 999.0;
    const double lhs = -t - std::log1p(-t);
    if (!(lhs <= phi_inf(2.0 * t))) o.fail(str("t=", t, ": ", lhs, " > ", phi_inf(2.0 * t)));
  }
  // tightness: K = 2 is feasible, K (1 - 1e-3) is not
  const double K = tau_norm(c).value;
  if (std::abs(K - 2.0) > 1e-6) o.fail(str("tau = ", K));
  if (curvature_excess(c, 2.0) > 1e-9) o.fail("K = 2 infeasible");
  if (curvature_excess(c, 2.0 * (1.0 - 1e-3)) <= 0.0) o.fail("K = 2(1 - 1e-3) still feasible");
  if (o.passed) o.detail = "1000 points dominated; K = 2 tight";
  return o;
}

// ---- 7-9: Monte Carlo ----

ExperimentPlan plan(const DistributionSpec& spec, long n, double p) {
  ExperimentPlan pl;
  pl.model = VectorModel{spec, n, p, true};
  pl.trials = kTrials;
  pl.seed = kSeed;
  pl.constant_grid = ExperimentPlan::default_constant_grid();
  return pl;
}

ReportOptions quick() {
  ReportOptions r;
  r.bootstrap_resamples = 0;
  r.threads = 0;  // SUBWEIBULL_THREADS
  return r;
}

struct GrowthRun {
  Outcome outcome;
  double C = 0.0;
  std::string csv;
};

GrowthRun growth() {
  GrowthRun g;
  g.csv = report_csv_header();
  std::vector<double> ns, gauss, exps;
  std::vector<ConcentrationReport> gauss_reports;
  for (long n : kDims) {
    ns.push_back(double(n));
    const auto rg = run_experiment(plan(DistributionSpec::pnormal(2.0), n, 2.0), quick());
    const auto re = run_experiment(plan(DistributionSpec::exponential(), n, 1.0), quick());
    gauss.push_back(rg.empirical_deviation_norm);
    exps.push_back(re.empirical_deviation_norm);
    g.C = std::max(g.C, *rg.thm14_C);
    gauss_reports.push_back(rg);
    g.csv += report_csv_row(rg) + report_csv_row(re);
  }
  const double sg = loglog_slope(ns, gauss), se = loglog_slope(ns, exps);
  Outcome& o = g.outcome;
  if (sg < -0.1 || sg > 0.1) o.fail(str("PNormal(2) slope ", sg, " outside [-0.1, 0.1]"));
  if (se < 0.4 || se > 0.6) o.fail(str("Exp slope ", se, " outside [0.4, 0.6]"));
  if (g.C > 8.0) o.fail(str("calibrated C = ", g.C, " > 8"));
  for (const auto& r : gauss_reports) {
    const double bound = thm14_bound(2.0, r.K_p, r.lp_norm_x1, g.C);
    if (bound < r.empirical_deviation_norm) {
      o.fail(str("n=", r.model.n, ": bound ", bound, " < ", r.empirical_deviation_norm));
    }
  }
  if (o.passed) o.detail = str("slopes ", sg, " (PNormal(2)), ", se, " (Exp); C = ", g.C);
  return g;
}

struct TailRun {
  Outcome outcome;
  std::string csv;
};

TailRun tails(double C) {
  TailRun t;
  auto pl = plan(DistributionSpec::pnormal(3.0), 256, 3.0);
  for (int i = 0; i < 12; ++i) pl.t_grid.push_back(0.1 * i);
  ReportOptions opts = quick();
  opts.tail_constant = C;
  const auto r = run_experiment(pl, opts);
  t.csv = tail_csv(r);
  double margin = INFINITY;
  for (const auto& row : r.tail_rows) {
    margin = std::min(margin, row.bound + 3.0 * row.se - row.freq);
    if (row.freq > row.bound + 3.0 * row.se) {
      t.outcome.fail(str("t=", row.t, ": freq ", row.freq, " > ", row.bound, " + 3 se"));
    }
  }
  if (t.outcome.passed) t.outcome.detail = str("12 points with C = ", C, ", smallest margin ", margin);
  return t;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool report(int id, const std::string& title, Outcome o, double secs, double limit) {
  if (secs > limit) o.fail(str("runtime ", secs, " s over the ", limit, " s limit"));
  std::printf("criterion %d: %s  %-44s %8.2f s  %s\n", id, o.passed ? "PASS" : "FAIL", title.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
  return o.passed;
}

template <class F>
bool timed(int id, const std::string& title, double limit, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o.fail(str("exception: ", e.what()));
  }
  return report(id, title, o, seconds_since(start), limit);
}

void save(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / name) << content;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string csv_dir = argc > 1 ? argv[1] : "";
  bool ok = true;
  ok &= timed(1, "closed-form norm reproduction", 10.0, closed_forms);
  ok &= timed(2, "tau-norm reproduction", 5.0, tau_values);
  ok &= timed(3, "conjugacy suite", 1.0, conjugacy);
  ok &= timed(4, "scalar lemma property suite", 5.0, lemmas);
  ok &= timed(5, "power-norm identity", 10.0, power_identity);
  ok &= timed(6, "MGF domination", 1.0, mgf_domination);

  // 7 and 8 run first with one worker, then again with eight for criterion 9.
  setenv("SUBWEIBULL_THREADS", "1", 1);
  GrowthRun g1;
  ok &= timed(7, "dimension-free vs dimension-dependent growth", 300.0, [&] {
    g1 = growth();
    return g1.outcome;
  });
  TailRun t1;
  ok &= timed(8, "tail domination", 120.0, [&] {
    if (!(g1.C > 0.0)) throw std::runtime_error("criterion 7 produced no constant");
    t1 = tails(g1.C);
    return t1.outcome;
  });
  save(csv_dir, "growth_threads1.csv", g1.csv);
  save(csv_dir, "tails_threads1.csv", t1.csv);

  setenv("SUBWEIBULL_THREADS", "8", 1);
  ok &= timed(9, "reproducibility across worker counts", 1e9, [&] {
    const GrowthRun g8 = growth();
    const TailRun t8 = tails(g8.C);
    save(csv_dir, "growth_threads8.csv", g8.csv);
    save(csv_dir, "tails_threads8.csv", t8.csv);
    Outcome o;
    if (g1.csv.empty() || t1.csv.empty()) o.fail("single-worker run missing");
    if (g8.csv != g1.csv) o.fail("growth CSV differs between 1 and 8 workers");
    if (t8.csv != t1.csv) o.fail("tail CSV differs between 1 and 8 workers");
    if (o.passed) o.detail = str("growth and tail CSVs identical (", g1.csv.size() + t1.csv.size(), " bytes)");
    return o;
  });
  return ok ? 0 : 1;
}
