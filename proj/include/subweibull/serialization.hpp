#pragma once

#include <string>

#include <json.hpp>

#include "subweibull/distribution.hpp"
#include "subweibull/experiment.hpp"
#include "subweibull/orlicz.hpp"
#include "subweibull/tau.hpp"

namespace subweibull {

// {"family": "exp"|"weibull"|"pnormal"|"halfgauss_pow", "params": {...}}.
nlohmann::json to_json(const DistributionSpec& spec);
// Throws ParameterError on unknown families, missing keys or invalid values.
DistributionSpec distribution_from_json(const nlohmann::json& j);

// {"value", "p", "method", "bracket": [lo, hi], "residual"}.
nlohmann::json to_json(const OrliczNormResult& result);
OrliczNormResult orlicz_result_from_json(const nlohmann::json& j);

// {"value", "margin_profile": [[t, slack], ...]}.
nlohmann::json to_json(const TauNormResult& result);

nlohmann::json to_json(const ConcentrationReport& report);

// %.17g
std::string format_double(double x);

// Columns: family,p,n,trials,seed,center,emp_dev_norm,boot_lo,boot_hi,
//          prop13_C,prop13_bound,thm14_C,thm14_bound
std::string report_csv_header();
std::string report_csv_row(const ConcentrationReport& report);
// Columns: family,p,n,t,freq,se,bound,C (header included).
std::string tail_csv(const ConcentrationReport& report);

}  // namespace subweibull
