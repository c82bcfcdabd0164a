#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subweibull/concentration.hpp"

namespace subweibull {

struct ExperimentPlan {
  VectorModel model;
  long trials = 100000;
  std::uint64_t seed = 0;
  std::vector<double> t_grid;         // nonnegative, increasing
  std::vector<double> constant_grid;  // candidate universal constants

  // Norm estimation needs >= 1e3 trials; tail estimation >= 1e4.
  void validate(bool for_tails = false) const;

  // 61 log-spaced points in [1/32, 32], six per octave.
  static std::vector<double> default_constant_grid();
};

struct TailRow {
  double t = 0.0;
  double freq = 0.0;  // fraction of trials with |deviation| >= t
  double se = 0.0;    // binomial standard error, counts floored at 0.5
  double bound = 0.0; // NaN when no bound applies
};

enum class CalibrationTarget {
  prop13,      // n^{1/(2p)} C^{1/p} K_p against the empirical deviation norm
  thm14,       // dimension-free norm bound (p >= 2)
  thm14_tail,  // dimension-free tail bound against exceedance frequencies
  bernstein,   // 2 exp(-n phi_1(t / (2 n C1 K))) against |X|_1 tails (p = 1)
};

std::string to_string(CalibrationTarget target);

// psi_p norm (closed form when available, else quadrature) and L^p norm of
// one coordinate.
struct CoordinateConstants {
  double K_p = 0.0;
  double lp_norm = 0.0;
};

CoordinateConstants coordinate_constants(const DistributionSpec& spec, double p);

// (n E|X_1|^p)^{1/p}: both ||(|X|_p)||_{L^p} and n^{1/p} ||X_1||_{L^p} under iid.
double center_value(const VectorModel& model);

// Signed |X^{(j)}|_p - center for j = 0..trials-1; trial j draws from
// stream (seed, j), so the result does not depend on the worker count.
std::vector<double> sample_deviations(const ExperimentPlan& plan, unsigned threads = 0);

double deviation_norm_estimate(const ExperimentPlan& plan, unsigned threads = 0);

// Exceedance frequencies of |deviation| on the grid; `bound` left as NaN.
std::vector<TailRow> exceedance_rows(std::span<const double> deviations,
                                     std::span<const double> t_grid);
std::vector<TailRow> tail_exceedance(const ExperimentPlan& plan, unsigned threads = 0);

// Smallest grid constant whose bound dominates the empirical value (norm
// targets) or every freq - 3 se (tail targets). Throws InfeasibleError when
// no grid value works.
double calibrate_constant(const ExperimentPlan& plan, CalibrationTarget target,
                          unsigned threads = 0);
double calibrate_constant(const ExperimentPlan& plan, CalibrationTarget target,
                          std::span<const double> deviations);

struct ConcentrationReport {
  VectorModel model;
  long trials = 0;
  std::uint64_t seed = 0;
  int bootstrap_resamples = 0;
  double center = 0.0;
  double K_p = 0.0;
  double lp_norm_x1 = 0.0;
  double empirical_deviation_norm = 0.0;
  double boot_lo = 0.0;
  double boot_hi = 0.0;
  double prop13_C = 0.0;
  double prop13_value = 0.0;
  // C solving prop13_bound(C) = empirical norm exactly (no grid).
  double prop13_implied_C = 0.0;
  std::optional<double> thm14_C;
  std::optional<double> thm14_value;
  std::optional<double> thm14_implied_C;
  std::vector<TailRow> tail_rows;
  std::string tail_bound_kind;  // "thm14_tail", "bernstein" or "none"
  double tail_C = 0.0;
  // thm14_C when the dimension-free bound applies, else prop13_C.
  double fitted_C = 0.0;
};

struct ReportOptions {
  int bootstrap_resamples = 200;
  unsigned threads = 0;
  // Constant for the tail bound column; calibrated on the tails when absent.
  std::optional<double> tail_constant;
  double norm_tol = 1e-8;
};

ConcentrationReport run_experiment(const ExperimentPlan& plan, const ReportOptions& options = {});

// 2.5% and 97.5% percentiles of the empirical psi_p norm over bootstrap
// resamples; resample b draws indices from stream (seed, 2^63 + b).
std::pair<double, double> bootstrap_interval(std::span<const double> abs_deviations, double p,
                                             std::uint64_t seed, int resamples,
                                             unsigned threads = 0);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace subweibull
