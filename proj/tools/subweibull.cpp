// subweibull: command-line driver for the norm, tau and concentration routines.
//
// Every subcommand reads an optional JSON config (--config) whose keys match
// the long flag names; flags given on the command line override the file.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "subweibull/concentration.hpp"
#include "subweibull/distribution.hpp"
#include "subweibull/error.hpp"
#include "subweibull/experiment.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/random.hpp"
#include "subweibull/serialization.hpp"
#include "subweibull/tau.hpp"
#include "subweibull/verify.hpp"

using nlohmann::json;
using namespace subweibull;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Command {
  CLI::App* app = nullptr;
  json flags = json::object();
  std::set<std::string> keys;  // keys accepted in a config file
};

struct Output {
  std::string text;
  int exit_code = kExitOk;
};

// ---- option plumbing ----

void add_string(Command& c, const std::string& key, const std::string& help) {
  c.keys.insert(key);
  c.app->add_option_function<std::string>("--" + key, [&c, key](const std::string& v) { c.flags[key] = v; },
                                          help);
}

void add_number(Command& c, const std::string& key, const std::string& help) {
  c.keys.insert(key);
  c.app->add_option_function<double>("--" + key, [&c, key](double v) { c.flags[key] = v; }, help);
}

void add_integer(Command& c, const std::string& key, const std::string& help) {
  c.keys.insert(key);
  c.app->add_option_function<long long>("--" + key, [&c, key](long long v) { c.flags[key] = v; }, help);
}

void add_numbers(Command& c, const std::string& key, const std::string& help) {
  c.keys.insert(key);
  c.app->add_option_function<std::vector<double>>(
      "--" + key, [&c, key](const std::vector<double>& v) { c.flags[key] = v; }, help);
}

// --family NAME --param key=value ...
void add_distribution(Command& c) {
  add_string(c, "family", "exp | weibull | pnormal | halfgauss_pow");
  c.keys.insert("params");
  c.app->add_option_function<std::vector<std::string>>(
      "--param",
      [&c](const std::vector<std::string>& items) {
        for (const auto& item : items) {
          const auto eq = item.find('=');
          if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--param", "expected key=value");
          try {
            std::size_t used = 0;
            const std::string text = item.substr(eq + 1);
            const double value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            c.flags["params"][item.substr(0, eq)] = value;
          } catch (const std::logic_error&) {
            throw CLI::ValidationError("--param", "value of " + item + " is not a number");
          }
        }
      },
      "family parameter, e.g. shape=2 (repeatable)");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParameterError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ParameterError("config " + path + " must hold a JSON object");
  return j;
}

// File values first, then flags; "params" merges key by key.
json merge(const Command& c, const std::string& config_path) {
  json cfg = config_path.empty() ? json::object() : load_config(config_path);
  for (const auto& [key, value] : cfg.items()) {
    if (!c.keys.count(key)) throw ParameterError("unknown config key \"" + key + "\" for " + c.app->get_name());
  }
  for (const auto& [key, value] : c.flags.items()) {
    if (key == "params" && cfg.contains("params") && cfg["params"].is_object()) {
      cfg["params"].update(value);
    } else {
      cfg[key] = value;
    }
  }
  return cfg;
}

// ---- typed config access ----

double number(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ParameterError("missing required \"" + key + "\"");
  if (!cfg.at(key).is_number()) throw ParameterError("\"" + key + "\" must be a number");
  return cfg.at(key).get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
  return cfg.contains(key) ? number(cfg, key) : fallback;
}

long long integer(const json& cfg, const std::string& key) {
  const double v = number(cfg, key);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ParameterError("\"" + key + "\" must be an integer");
  return static_cast<long long>(v);
}

long long integer_or(const json& cfg, const std::string& key, long long fallback) {
  return cfg.contains(key) ? integer(cfg, key) : fallback;
}

std::uint64_t seed_of(const json& cfg) {
  const long long s = integer_or(cfg, "seed", 0);
  if (s < 0) throw ParameterError("\"seed\" must be nonnegative");
  return static_cast<std::uint64_t>(s);
}

std::string text(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ParameterError("missing required \"" + key + "\"");
  if (!cfg.at(key).is_string()) throw ParameterError("\"" + key + "\" must be a string");
  return cfg.at(key).get<std::string>();
}

std::string text_or(const json& cfg, const std::string& key, const std::string& fallback) {
  return cfg.contains(key) ? text(cfg, key) : fallback;
}

std::vector<double> numbers(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ParameterError("missing required \"" + key + "\"");
  const json& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) throw ParameterError("\"" + key + "\" must be a number or a nonempty array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ParameterError("\"" + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

DistributionSpec distribution(const json& cfg) {
  return distribution_from_json({{"family", text(cfg, "family")}, {"params", cfg.value("params", json::object())}});
}

unsigned threads_of(const json& cfg) {
  const long long t = integer_or(cfg, "threads", 0);
  if (t < 0 || t > 4096) throw ParameterError("\"threads\" must be in [0, 4096]");
  return static_cast<unsigned>(t);
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) s += (s.empty() ? "" : ",") + c;
  return s + '\n';
}

std::string fmt(double x) { return std::isnan(x) ? std::string() : format_double(x); }

// ---- subcommands ----

Output cmd_norm(const json& cfg, bool csv) {
  const DistributionSpec spec = distribution(cfg);
  const double p = number(cfg, "p");
  const std::string method = text(cfg, "method");
  NormOptions opts;
  opts.tol = number_or(cfg, "tol", opts.tol);
  OrliczNormResult r;
  if (method == "analytic") {
    r = psi_norm_analytic(spec, p);
  } else if (method == "quadrature") {
    r = psi_norm_quadrature(spec, p, opts);
  } else if (method == "empirical") {
    const long long count = integer(cfg, "samples");
    if (count < 100) throw ParameterError("\"samples\" must be at least 100");
    RandomStream stream(seed_of(cfg), 0);
    const auto x = sample(spec, stream, static_cast<std::size_t>(count));
    r = psi_norm_empirical(x, p, opts.tol);
  } else {
    throw ParameterError("method must be analytic, quadrature or empirical");
  }
  if (!csv) return {to_json(r).dump(2) + '\n'};
  return {csv_line({"family", "p", "method", "value", "lo", "hi", "residual"}) +
          csv_line({spec.name(), fmt(r.p), to_string(r.method), fmt(r.value), fmt(r.lo), fmt(r.hi),
                    fmt(r.residual)})};
}

Cumulant cumulant_of(const json& cfg, std::string& label) {
  label = text(cfg, "cumulant");
  if (label == "exp_centered") return Cumulant::exp_centered();
  if (label == "exp_centered_sum") {
    const long long n = integer(cfg, "n");
    if (n < 1) throw ParameterError("\"n\" must be at least 1");
    return Cumulant::exp_centered().times(static_cast<double>(n));
  }
  if (label == "gaussian") {
    const double sigma = number(cfg, "sigma");
    if (!(sigma > 0.0)) throw ParameterError("\"sigma\" must be positive");
    return Cumulant::gaussian(sigma);
  }
  if (label == "family") return centered_cumulant(distribution(cfg));
  throw ParameterError("cumulant must be exp_centered, exp_centered_sum, gaussian or family");
}

Output cmd_tau(const json& cfg, bool csv) {
  std::string label;
  Cumulant c = cumulant_of(cfg, label);
  if (cfg.contains("scale")) c = c.scaled(number(cfg, "scale"));
  TauOptions opts;
  opts.tol = number_or(cfg, "tol", opts.tol);
  if (!(opts.tol > 0.0 && opts.tol < 1.0)) throw ParameterError("\"tol\" must be in (0, 1)");
  const std::string definition = text_or(cfg, "definition", "curvature");
  TauNormResult r;
  if (definition == "curvature") r = tau_norm(c, opts);
  else if (definition == "pointwise") r = tau_norm_pointwise(c, opts);
  else throw ParameterError("definition must be curvature or pointwise");
  if (!csv) {
    json j = to_json(r);
    j["cumulant"] = label;
    j["definition"] = definition;
    return {j.dump(2) + '\n'};
  }
  std::string s = csv_line({"t", "margin"});
  for (const auto& [t, m] : r.margin_profile) s += csv_line({fmt(t), fmt(m)});
  return {csv_line({"cumulant", "definition", "value"}) + csv_line({label, definition, fmt(r.value)}) + '\n' + s};
}

Output cmd_conjugate(const json& cfg, bool csv) {
  const std::string f = text(cfg, "f");
  const double a = number_or(cfg, "a", 1.0);
  if (!(a > 0.0)) throw ParameterError("\"a\" must be positive");
  std::function<double(double)> fn;
  double bound = 0.0;
  if (f == "phi_inf") {
    fn = phi_inf;
    bound = 2.0;
  } else if (f == "phi_inf_scaled") {
    fn = [a](double u) { return phi_inf(a * u); };
    bound = 2.0 / a;
  } else if (f == "quadratic") {
    fn = [](double u) { return 0.5 * u * u; };
    bound = 1e6;
  } else if (f == "phi1") {
    fn = phi1;
    bound = 1e6;
  } else {
    throw ParameterError("f must be phi_inf, phi_inf_scaled, quadratic or phi1");
  }
  bound = number_or(cfg, "search-bound", bound);
  if (!(bound > 0.0)) throw ParameterError("\"search-bound\" must be positive");
  json rows = json::array();
  std::string s = csv_line({"f", "t", "value"});
  for (double t : numbers(cfg, "t")) {
    const double v = convex_conjugate(fn, t, bound);
    rows.push_back({{"t", t}, {"value", v}});
    s += csv_line({f, fmt(t), fmt(v)});
  }
  if (csv) return {s};
  json j{{"f", f}, {"values", rows}};
  if (f == "phi_inf_scaled") j["a"] = a;
  return {j.dump(2) + '\n'};
}

Output cmd_tailbound(const json& cfg, bool csv) {
  const std::string kind = text_or(cfg, "kind", "psi");
  const std::vector<double> ts = numbers(cfg, "t");
  for (double t : ts) {
    if (!(t >= 0.0)) throw ParameterError("\"t\" values must be nonnegative");
  }
  const double p = number(cfg, "p");
  std::optional<DistributionSpec> spec;
  if (cfg.contains("family")) spec = distribution(cfg);
  std::function<double(double)> bound;
  json meta{{"kind", kind}, {"p", p}};
  if (kind == "psi") {
    double norm;
    if (cfg.contains("norm")) {
      norm = number(cfg, "norm");
    } else if (spec) {
      norm = psi_norm_quadrature(*spec, p).value;
    } else {
      throw ParameterError("psi tail bound needs \"norm\" or a distribution");
    }
    if (!(norm > 0.0)) throw ParameterError("\"norm\" must be positive");
    meta["norm"] = norm;
    bound = [=](double t) { return psi_tail_bound(norm, p, t); };
  } else if (kind == "thm14_tail") {
    if (!spec) throw ParameterError("thm14_tail needs a distribution");
    const double C = number(cfg, "C");
    const auto k = coordinate_constants(*spec, p);
    meta["C"] = C;
    meta["K_p"] = k.K_p;
    meta["lp_norm"] = k.lp_norm;
    bound = [=](double t) { return thm14_tail_bound(p, k.K_p, k.lp_norm, C, t); };
  } else {
    throw ParameterError("kind must be psi or thm14_tail");
  }
  json rows = json::array();
  std::string s = csv_line({"t", "bound", "exact_tail"});
  for (double t : ts) {
    const double b = clamp_probability(bound(t));
    const double exact = (spec && kind == "psi") ? spec->tail(t) : NAN;
    json row{{"t", t}, {"bound", b}};
    if (!std::isnan(exact)) row["exact_tail"] = exact;
    rows.push_back(row);
    s += csv_line({fmt(t), fmt(b), fmt(exact)});
  }
  if (csv) return {s};
  meta["rows"] = rows;
  return {meta.dump(2) + '\n'};
}

Output cmd_bernstein(const json& cfg, bool csv) {
  const long long n = integer(cfg, "n");
  const double C1 = number_or(cfg, "C1", 2.0);
  double K;
  if (cfg.contains("K")) {
    K = number(cfg, "K");
  } else if (cfg.contains("family")) {
    const DistributionSpec spec = distribution(cfg);
    try {
      K = psi_norm_analytic(spec, 1.0).value;
    } catch (const NoClosedFormError&) {
      K = psi_norm_quadrature(spec, 1.0).value;
    }
  } else {
    throw ParameterError("bernstein needs \"K\" or a distribution");
  }
  json rows = json::array();
  std::string s = csv_line({"n", "t", "K", "C1", "phi1_form", "min_form"});
  for (double t : numbers(cfg, "t")) {
    const BernsteinBound b = bernstein_bound(n, t, K, C1);
    rows.push_back({{"t", t}, {"phi1_form", b.phi1_form}, {"min_form", b.min_form}});
    s += csv_line({std::to_string(n), fmt(t), fmt(K), fmt(C1), fmt(b.phi1_form), fmt(b.min_form)});
  }
  if (csv) return {s};
  return {json{{"n", n}, {"K", K}, {"C1", C1}, {"rows", rows}}.dump(2) + '\n'};
}

Output cmd_concentrate(const json& cfg, bool csv) {
  ExperimentPlan plan;
  plan.model.coordinate = distribution(cfg);
  plan.model.n = static_cast<long>(integer(cfg, "n"));
  plan.model.p = number(cfg, "p");
  plan.trials = static_cast<long>(integer_or(cfg, "trials", 100000));
  plan.seed = seed_of(cfg);
  if (cfg.contains("t")) {
    plan.t_grid = numbers(cfg, "t");
  } else if (cfg.contains("t-max")) {
    const double t_max = number(cfg, "t-max");
    const long long points = integer_or(cfg, "t-points", 12);
    if (!(t_max > 0.0) || points < 2) throw ParameterError("need t-max > 0 and t-points >= 2");
    for (long long i = 0; i < points; ++i) plan.t_grid.push_back(t_max * double(i) / double(points - 1));
  }
  if (cfg.contains("constant-grid")) plan.constant_grid = numbers(cfg, "constant-grid");
  ReportOptions opts;
  opts.threads = threads_of(cfg);
  opts.bootstrap_resamples = static_cast<int>(integer_or(cfg, "bootstrap", 200));
  if (opts.bootstrap_resamples < 0) throw ParameterError("\"bootstrap\" must be nonnegative");
  if (cfg.contains("tail-C")) opts.tail_constant = number(cfg, "tail-C");
  const ConcentrationReport r = run_experiment(plan, opts);
  if (!csv) return {to_json(r).dump(2) + '\n'};
  std::string s = report_csv_header() + report_csv_row(r);
  if (!r.tail_rows.empty()) s += '\n' + tail_csv(r);
  return {s};
}

Output cmd_verify(const json& cfg, bool csv) {
  VerifyOptions opts;
  opts.mc_trials = static_cast<long>(integer_or(cfg, "trials", opts.mc_trials));
  if (opts.mc_trials < 10000) throw ParameterError("\"trials\" must be at least 10000");
  opts.seed = cfg.contains("seed") ? seed_of(cfg) : opts.seed;
  opts.threads = threads_of(cfg);
  opts.include_mc = !cfg.value("no-mc", false);
  const auto results = run_verification(opts);
  bool all = true;
  json rows = json::array();
  std::ostringstream table;
  std::string s = csv_line({"module", "check", "status", "seconds", "detail"});
  for (const auto& r : results) {
    all = all && r.passed;
    rows.push_back({{"module", r.module}, {"check", r.name}, {"passed", r.passed},
                    {"seconds", r.seconds}, {"detail", r.detail}});
    std::string quoted = '"' + r.name + '"';
    s += csv_line({r.module, quoted, r.passed ? "PASS" : "FAIL", fmt(r.seconds), '"' + r.detail + '"'});
    char line[256];
    std::snprintf(line, sizeof line, "%-4s  %-7s %-64s %7.2fs", r.passed ? "PASS" : "FAIL",
                  r.module.c_str(), r.name.c_str(), r.seconds);
    table << line;
    if (!r.passed) table << "  " << r.detail;
    table << '\n';
  }
  std::cerr << table.str();
  const int code = all ? kExitOk : kExitVerify;
  if (csv) return {s, code};
  return {json{{"passed", all}, {"checks", rows}}.dump(2) + '\n', code};
}

// Writes to a temporary sibling and renames, so a failed run leaves no file.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + tmp.string());
    out << content;
    out.close();
    if (!out) {
      fs::remove(tmp);
      throw ParameterError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ParameterError("cannot rename output to " + path + ": " + ec.message());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz psi_p norms, tau norms and concentration experiments"};
  app.require_subcommand(1, 1);
  std::string config_path, out_path, format = "json";

  using Handler = Output (*)(const json&, bool);
  std::vector<std::pair<Command, Handler>> commands;
  commands.reserve(7);
  auto add = [&](const std::string& name, const std::string& help, Handler h) -> Command& {
    commands.emplace_back(Command{}, h);
    Command& c = commands.back().first;
    c.app = app.add_subcommand(name, help);
    c.app->add_option("--config", config_path, "JSON config; flags override its keys")->check(CLI::ExistingFile);
    c.app->add_option("--out", out_path, "output file (default: stdout)");
    c.app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    return c;
  };

  {
    Command& c = add("norm", "psi_p norm of a distribution", cmd_norm);
    add_distribution(c);
    add_number(c, "p", "Orlicz exponent");
    add_string(c, "method", "analytic | quadrature | empirical");
    add_number(c, "tol", "relative bracket tolerance");
    add_integer(c, "samples", "sample count (empirical)");
    add_integer(c, "seed", "seed (empirical)");
  }
  {
    Command& c = add("tau", "tau_phi1 norm of a centered cumulant", cmd_tau);
    add_string(c, "cumulant", "exp_centered | exp_centered_sum | gaussian | family");
    add_integer(c, "n", "summands (exp_centered_sum)");
    add_number(c, "sigma", "standard deviation (gaussian)");
    add_number(c, "scale", "use the cumulant of scale * X");
    add_string(c, "definition", "curvature (default) | pointwise");
    add_number(c, "tol", "relative tolerance");
    add_distribution(c);
  }
  {
    Command& c = add("conjugate", "convex conjugate sup_u {t u - f(u)}", cmd_conjugate);
    add_string(c, "f", "phi_inf | phi_inf_scaled | quadratic | phi1");
    add_numbers(c, "t", "evaluation points");
    add_number(c, "a", "scale for phi_inf_scaled: u -> phi_inf(a u)");
    add_number(c, "search-bound", "half-width of the search interval");
  }
  {
    Command& c = add("tailbound", "tail bounds P(|X| >= t)", cmd_tailbound);
    add_string(c, "kind", "psi (default) | thm14_tail");
    add_numbers(c, "t", "thresholds");
    add_number(c, "p", "exponent");
    add_number(c, "norm", "psi_p norm (psi kind)");
    add_number(c, "C", "constant (thm14_tail kind)");
    add_distribution(c);
  }
  {
    Command& c = add("bernstein", "Bernstein bound for a sum of n centered variables", cmd_bernstein);
    add_integer(c, "n", "number of summands");
    add_numbers(c, "t", "thresholds");
    add_number(c, "K", "psi_1 norm of the summands");
    add_number(c, "C1", "universal constant (default 2)");
    add_distribution(c);
  }
  {
    Command& c = add("concentrate", "Monte Carlo concentration of |X|_p", cmd_concentrate);
    add_distribution(c);
    add_integer(c, "n", "dimension");
    add_number(c, "p", "norm exponent (>= 1)");
    add_integer(c, "trials", "Monte Carlo trials (default 100000)");
    add_integer(c, "seed", "seed");
    add_numbers(c, "t", "tail thresholds");
    add_number(c, "t-max", "uniform tail grid on [0, t-max]");
    add_integer(c, "t-points", "points of the uniform grid (default 12)");
    add_numbers(c, "constant-grid", "candidate constants for calibration");
    add_integer(c, "bootstrap", "bootstrap resamples (default 200)");
    add_number(c, "tail-C", "fixed tail-bound constant");
    add_integer(c, "threads", "workers (default SUBWEIBULL_THREADS or all cores)");
  }
  {
    Command& c = add("verify", "run every invariant check", cmd_verify);
    add_integer(c, "trials", "Monte Carlo trials per experiment (default 20000)");
    add_integer(c, "seed", "seed");
    add_integer(c, "threads", "workers");
    c.keys.insert("no-mc");
    c.app->add_flag_function("--no-mc", [&c](std::int64_t) { c.flags["no-mc"] = true; }, "skip Monte Carlo checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (auto& [command, handler] : commands) {
    if (!command.app->parsed()) continue;
    try {
      const json cfg = merge(command, config_path);
      const Output result = handler(cfg, format == "csv");
      if (out_path.empty()) {
        std::cout << result.text << std::flush;
      } else {
        write_atomic(out_path, result.text);
      }
      return result.exit_code;
    } catch (const ParameterError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const json::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const NumericError& e) {
      std::cerr << "numeric error: " << e.what() << '\n';
      return kExitNumeric;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitNumeric;
    }
  }
  return kExitConfig;
}
