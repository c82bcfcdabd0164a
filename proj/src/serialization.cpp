#include "subweibull/serialization.hpp"

#include <cmath>
#include <cstdio>

#include "subweibull/error.hpp"

namespace subweibull {

using nlohmann::json;

namespace {

double param(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number()) {
    throw ParameterError(std::string("distribution params need numeric \"") + key + "\"");
  }
  return params.at(key).get<double>();
}

// NaN and infinities become null; JSON has no literal for them.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

}  // namespace

json to_json(const DistributionSpec& spec) {
  json params = json::object();
  switch (spec.family()) {
    case Family::exponential: break;
    case Family::weibull:
      params["shape"] = spec.shape();
      params["scale"] = spec.scale();
      break;
    case Family::pnormal: params["p"] = spec.shape(); break;
    case Family::halfgauss_pow:
      params["p"] = spec.shape();
      params["scale"] = spec.scale();
      break;
  }
  return {{"family", spec.name()}, {"params", params}};
}

DistributionSpec distribution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw ParameterError("distribution needs a string \"family\"");
  }
  const std::string family = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ParameterError("distribution \"params\" must be an object");
  if (family == "exp") return DistributionSpec::exponential();
  if (family == "weibull") return DistributionSpec::weibull(param(params, "shape"), param(params, "scale"));
  if (family == "pnormal") return DistributionSpec::pnormal(param(params, "p"));
  if (family == "halfgauss_pow") {
    return DistributionSpec::halfgauss_pow(param(params, "p"), param(params, "scale"));
  }
  throw ParameterError("unknown distribution family \"" + family + "\"");
}

json to_json(const OrliczNormResult& r) {
  return {{"value", number(r.value)},
          {"p", r.p},
          {"method", to_string(r.method)},
          {"bracket", {number(r.lo), number(r.hi)}},
          {"residual", number(r.residual)}};
}

OrliczNormResult orlicz_result_from_json(const json& j) {
  try {
    OrliczNormResult r;
    r.value = j.at("value").get<double>();
    r.p = j.at("p").get<double>();
    const std::string method = j.at("method").get<std::string>();
    if (method == "analytic") r.method = NormMethod::analytic;
    else if (method == "quadrature") r.method = NormMethod::quadrature;
    else if (method == "empirical") r.method = NormMethod::empirical;
    else throw ParameterError("unknown norm method \"" + method + "\"");
    r.lo = j.at("bracket").at(0).get<double>();
    r.hi = j.at("bracket").at(1).get<double>();
    r.residual = j.at("residual").is_null() ? NAN : j.at("residual").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed norm result: ") + e.what());
  }
}

json to_json(const TauNormResult& r) {
  json profile = json::array();
  for (const auto& [t, slack] : r.margin_profile) profile.push_back({number(t), number(slack)});
  return {{"value", number(r.value)}, {"margin_profile", profile}};
}

json to_json(const ConcentrationReport& r) {
  json tails = json::array();
  for (const auto& row : r.tail_rows) {
    tails.push_back({{"t", row.t}, {"freq", row.freq}, {"se", row.se}, {"bound", number(row.bound)}});
  }
  auto opt = [](const std::optional<double>& x) { return x ? number(*x) : json(nullptr); };
  return {{"model",
           {{"coordinate", to_json(r.model.coordinate)},
            {"n", r.model.n},
            {"p", r.model.p},
            {"iid", r.model.iid}}},
          {"trials", r.trials},
          {"seed", r.seed},
          {"bootstrap_resamples", r.bootstrap_resamples},
          {"center", r.center},
          {"K_p", r.K_p},
          {"lp_norm_x1", r.lp_norm_x1},
          {"empirical_deviation_norm", r.empirical_deviation_norm},
          {"bootstrap_interval", {number(r.boot_lo), number(r.boot_hi)}},
          {"prop13", {{"C", r.prop13_C}, {"bound", r.prop13_value}, {"implied_C", r.prop13_implied_C}}},
          {"thm14",
           {{"C", opt(r.thm14_C)}, {"bound", opt(r.thm14_value)}, {"implied_C", opt(r.thm14_implied_C)}}},
          {"tail_bound", r.tail_bound_kind},
          {"tail_C", number(r.tail_C)},
          {"tail_rows", tails},
          {"fitted_C", r.fitted_C}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string report_csv_header() {
  return "family,p,n,trials,seed,center,emp_dev_norm,boot_lo,boot_hi,prop13_C,prop13_bound,"
         "thm14_C,thm14_bound\n";
}

std::string report_csv_row(const ConcentrationReport& r) {
  std::string s = r.model.coordinate.name();
  s += ',' + format_double(r.model.p);
  s += ',' + std::to_string(r.model.n);
  s += ',' + std::to_string(r.trials);
  s += ',' + std::to_string(r.seed);
  s += ',' + format_double(r.center);
  s += ',' + format_double(r.empirical_deviation_norm);
  s += ',' + cell(r.boot_lo);
  s += ',' + cell(r.boot_hi);
  s += ',' + format_double(r.prop13_C);
  s += ',' + format_double(r.prop13_value);
  s += ',' + (r.thm14_C ? format_double(*r.thm14_C) : std::string());
  s += ',' + (r.thm14_value ? format_double(*r.thm14_value) : std::string());
  s += '\n';
  return s;
}

std::string tail_csv(const ConcentrationReport& r) {
  std::string s = "family,p,n,t,freq,se,bound,C\n";
  for (const auto& row : r.tail_rows) {
    s += r.model.coordinate.name();
    s += ',' + format_double(r.model.p);
    s += ',' + std::to_string(r.model.n);
    s += ',' + format_double(row.t);
    s += ',' + format_double(row.freq);
    s += ',' + format_double(row.se);
    s += ',' + cell(row.bound);
    s += ',' + cell(r.tail_C);
    s += '\n';
  }
  return s;
}

}  // namespace subweibull
