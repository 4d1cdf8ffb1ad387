#pragma once

#include "sfwm/config.hpp"
#include "sfwm/error.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace sfwm::cli {

using Json = nlohmann::ordered_json;

/// What a command produces: a JSON report, the same result as a tidy CSV
/// table, and auxiliary tables keyed by file name.
struct Output {
    Json json;
    std::string csv;
    std::map<std::string, std::string> files;
};

/// 0 success, 1 physics or no solution, 2 configuration or input error,
/// 3 numerical non-convergence.
int exit_code(ErrorCode code);

/// Compact, stable rendering used for every emitted report.
std::string render(const Json& j);

Output cmd_solve_mode(const config::RunConfig& cfg, double lambda_um, bool dump_field);

/// Overrides the configured peak power when given (mean power is ignored).
Output cmd_pipeline(const config::RunConfig& cfg, std::optional<double> peak_power_w = std::nullopt);

/// Runs the fibre scenario at the five reference mean powers. Requires a
/// [fiber] configuration such as the `alibart` preset.
Output cmd_validate_alibart(const config::RunConfig& cfg);

/// Grid search over the [design] ranges; `top` limits the JSON listing.
Output cmd_design(const config::RunConfig& cfg, int top = 10);

/// Four ±delta perturbations, each reported as a drift row and a row with the
/// pump retuned to restore the nominal signal.
Output cmd_tolerance(const config::RunConfig& cfg);

/// Phase-matching curve over [design] pump_range, optionally limited to the
/// [design] idler band.
Output cmd_pm_curve(const config::RunConfig& cfg, bool idler_band_only);

struct AlibartReference {
    double mean_power_w;
    double rate_per_s;
};

/// Mean powers and detected rates of the reference fibre measurement.
const std::vector<AlibartReference>& alibart_reference();

} // namespace sfwm::cli
