#include "subweibull/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subweibull/error.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/parallel.hpp"
#include "subweibull/random.hpp"
#include "subweibull/tau.hpp"

namespace subweibull {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kBootstrapStreamBase = std::uint64_t{1} << 63;

double tail_bound_at(const ExperimentPlan& plan, const CoordinateConstants& constants,
                     CalibrationTarget target, double C, double t) {
  const VectorModel& m = plan.model;
  if (target == CalibrationTarget::thm14_tail) {
    return thm14_tail_bound(m.p, constants.K_p, constants.lp_norm, C, t);
  }
  // |X|_1 - n E|X_1| is n times the centered average of the |X_i|.
  const double n = static_cast<double>(m.n);
  return bernstein_bound(m.n, t / n, constants.K_p, C).phi1_form;
}

bool tail_dominated(std::span<const TailRow> rows, auto&& bound) {
  return std::all_of(rows.begin(), rows.end(),
                     [&](const TailRow& r) { return bound(r.t) >= r.freq - 3.0 * r.se; });
}

void require_tail_target(const VectorModel& m, CalibrationTarget target) {
  if (target == CalibrationTarget::thm14 || target == CalibrationTarget::thm14_tail) {
    if (!m.dimension_free_applicable()) {
      throw ParameterError("dimension-free bound needs p >= 2 and iid coordinates");
    }
  }
  if (target == CalibrationTarget::bernstein && m.p != 1.0) {
    throw ParameterError("bernstein tail calibration needs p = 1");
  }
}

}  // namespace

void ExperimentPlan::validate(bool for_tails) const {
  model.validate();
  if (trials < 1000) throw ParameterError("trials must be >= 1000 for norm estimation");
  if (for_tails && trials < 10000) throw ParameterError("trials must be >= 10000 for tails");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw ParameterError("t_grid must be nonnegative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ParameterError("t_grid must be increasing");
  }
  for (double c : constant_grid) {
    if (!(c > 0.0)) throw ParameterError("constant_grid values must be > 0");
  }
}

std::vector<double> ExperimentPlan::default_constant_grid() {
  // 2^{k/6} for k = -30..30
  std::vector<double> grid(61);
  for (int k = -30; k <= 30; ++k) grid[k + 30] = std::exp2(k / 6.0);
  return grid;
}

std::string to_string(CalibrationTarget target) {
  switch (target) {
    case CalibrationTarget::prop13: return "prop13";
    case CalibrationTarget::thm14: return "thm14";
    case CalibrationTarget::thm14_tail: return "thm14_tail";
    case CalibrationTarget::bernstein: return "bernstein";
  }
  return "?";
}

CoordinateConstants coordinate_constants(const DistributionSpec& spec, double p) {
  CoordinateConstants out;
  try {
    out.K_p = psi_norm_analytic(spec, p).value;
  } catch (const NoClosedFormError&) {
    out.K_p = psi_norm_quadrature(spec, p).value;
  }
  out.lp_norm = std::pow(spec.abs_moment(p), 1.0 / p);
  return out;
}

double center_value(const VectorModel& model) {
  model.validate();
  return std::pow(static_cast<double>(model.n) * model.coordinate.abs_moment(model.p),
                  1.0 / model.p);
}

std::vector<double> sample_deviations(const ExperimentPlan& plan, unsigned threads) {
  plan.validate();
  const VectorModel& m = plan.model;
  const double center = center_value(m);
  std::vector<double> out(static_cast<std::size_t>(plan.trials));
  parallel_for(out.size(), resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    std::vector<double> coords(static_cast<std::size_t>(m.n));
    for (std::size_t j = begin; j < end; ++j) {
      RandomStream stream(plan.seed, j);
      for (auto& x : coords) x = m.coordinate.draw(stream);
      out[j] = lp_norm(coords, m.p) - center;
    }
  });
  return out;
}

double deviation_norm_estimate(const ExperimentPlan& plan, unsigned threads) {
  const std::vector<double> d = sample_deviations(plan, threads);
  return psi_norm_empirical(d, plan.model.p).value;
}

std::vector<TailRow> exceedance_rows(std::span<const double> deviations,
                                     std::span<const double> t_grid) {
  std::vector<double> a(deviations.size());
  std::transform(deviations.begin(), deviations.end(), a.begin(),
                 [](double d) { return std::abs(d); });
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  std::vector<TailRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto count = static_cast<double>(a.end() - std::lower_bound(a.begin(), a.end(), t));
    const double floored = std::clamp(count, 0.5, n - 0.5) / n;
    rows.push_back({t, count / n, std::sqrt(floored * (1.0 - floored) / n), kNaN});
  }
  return rows;
}

std::vector<TailRow> tail_exceedance(const ExperimentPlan& plan, unsigned threads) {
  plan.validate(true);
  const std::vector<double> d = sample_deviations(plan, threads);
  return exceedance_rows(d, plan.t_grid);
}

double calibrate_constant(const ExperimentPlan& plan, CalibrationTarget target,
                          std::span<const double> deviations) {
  const VectorModel& m = plan.model;
  require_tail_target(m, target);
  if (plan.constant_grid.empty()) throw ParameterError("constant_grid is empty");
  std::vector<double> grid = plan.constant_grid;
  std::sort(grid.begin(), grid.end());
  const CoordinateConstants constants = coordinate_constants(m.coordinate, m.p);

  if (target == CalibrationTarget::prop13 || target == CalibrationTarget::thm14) {
    const double empirical = psi_norm_empirical(deviations, m.p).value;
    for (double C : grid) {
      const double bound = target == CalibrationTarget::prop13
                               ? prop13_bound(m.n, m.p, constants.K_p, C)
                               : thm14_bound(m.p, constants.K_p, constants.lp_norm, C);
      if (bound >= empirical) return C;
    }
  } else {
    if (plan.t_grid.empty()) throw ParameterError("tail calibration needs a t_grid");
    const std::vector<TailRow> rows = exceedance_rows(deviations, plan.t_grid);
    for (double C : grid) {
      if (target == CalibrationTarget::bernstein && C < 1.0) continue;
      if (tail_dominated(rows, [&](double t) { return tail_bound_at(plan, constants, target, C, t); })) {
        return C;
      }
    }
  }
  throw InfeasibleError("no constant in the grid dominates the " + to_string(target) +
                        " comparison (largest " + std::to_string(grid.back()) + ")");
}

double calibrate_constant(const ExperimentPlan& plan, CalibrationTarget target, unsigned threads) {
  const bool tails =
      target == CalibrationTarget::thm14_tail || target == CalibrationTarget::bernstein;
  plan.validate(tails);
  require_tail_target(plan.model, target);
  const std::vector<double> d = sample_deviations(plan, threads);
  return calibrate_constant(plan, target, d);
}

std::pair<double, double> bootstrap_interval(std::span<const double> abs_deviations, double p,
                                             std::uint64_t seed, int resamples, unsigned threads) {
  if (resamples < 2) throw ParameterError("bootstrap needs at least 2 resamples");
  const std::size_t n = abs_deviations.size();
  std::vector<double> norms(static_cast<std::size_t>(resamples));
  parallel_for(norms.size(), resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    std::vector<double> draw(n);
    for (std::size_t b = begin; b < end; ++b) {
      RandomStream stream(seed, kBootstrapStreamBase + b);
      for (auto& x : draw) {
        const auto idx = static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(n));
        x = abs_deviations[std::min(idx, n - 1)];
      }
      norms[b] = psi_norm_empirical(draw, p, 1e-6).value;
    }
  });
  std::sort(norms.begin(), norms.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(norms.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < norms.size() ? norms[i] + frac * (norms[i + 1] - norms[i]) : norms[i];
  };
  return {quantile(0.025), quantile(0.975)};
}

ConcentrationReport run_experiment(const ExperimentPlan& plan, const ReportOptions& options) {
  plan.validate(!plan.t_grid.empty());
  const VectorModel& m = plan.model;
  const unsigned threads = resolve_threads(options.threads);

  ConcentrationReport r;
  r.model = m;
  r.trials = plan.trials;
  r.seed = plan.seed;
  r.bootstrap_resamples = options.bootstrap_resamples;
  r.center = center_value(m);
  const CoordinateConstants constants = coordinate_constants(m.coordinate, m.p);
  r.K_p = constants.K_p;
  r.lp_norm_x1 = constants.lp_norm;

  const std::vector<double> d = sample_deviations(plan, threads);
  std::vector<double> abs_d(d.size());
  std::transform(d.begin(), d.end(), abs_d.begin(), [](double x) { return std::abs(x); });
  r.empirical_deviation_norm = psi_norm_empirical(abs_d, m.p, options.norm_tol).value;
  if (options.bootstrap_resamples > 0) {
    std::tie(r.boot_lo, r.boot_hi) =
        bootstrap_interval(abs_d, m.p, plan.seed, options.bootstrap_resamples, threads);
  } else {
    r.boot_lo = r.boot_hi = kNaN;
  }

  ExperimentPlan grid_plan = plan;
  if (grid_plan.constant_grid.empty()) grid_plan.constant_grid = ExperimentPlan::default_constant_grid();

  r.prop13_C = calibrate_constant(grid_plan, CalibrationTarget::prop13, d);
  r.prop13_value = prop13_bound(m.n, m.p, r.K_p, r.prop13_C);
  r.prop13_implied_C =
      std::pow(r.empirical_deviation_norm /
                   (std::pow(static_cast<double>(m.n), 1.0 / (2.0 * m.p)) * r.K_p),
               m.p);
  r.fitted_C = r.prop13_C;
  if (m.dimension_free_applicable()) {
    r.thm14_C = calibrate_constant(grid_plan, CalibrationTarget::thm14, d);
    r.thm14_value = thm14_bound(m.p, r.K_p, r.lp_norm_x1, *r.thm14_C);
    r.thm14_implied_C = r.empirical_deviation_norm / thm14_bound(m.p, r.K_p, r.lp_norm_x1, 1.0);
    r.fitted_C = *r.thm14_C;
  }

  r.tail_rows = exceedance_rows(d, plan.t_grid);
  std::optional<CalibrationTarget> tail_target;
  if (m.dimension_free_applicable()) tail_target = CalibrationTarget::thm14_tail;
  else if (m.p == 1.0) tail_target = CalibrationTarget::bernstein;
  r.tail_bound_kind = tail_target ? to_string(*tail_target) : "none";
  if (tail_target && !r.tail_rows.empty()) {
    r.tail_C = options.tail_constant ? *options.tail_constant
                                     : calibrate_constant(grid_plan, *tail_target, d);
    for (auto& row : r.tail_rows) row.bound = tail_bound_at(plan, constants, *tail_target, r.tail_C, row.t);
  } else {
    r.tail_C = kNaN;
  }
  return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace subweibull
