#pragma once

#include "sfwm/design.hpp"
#include "sfwm/materials.hpp"
#include "sfwm/modes.hpp"
#include "sfwm/physics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfwm::config {

enum class Dim { Length, Time, Power, Frequency, Attenuation, Area, NonlinearIndex, None };

/// Parses "<number> <unit>" (the space is optional) for the requested
/// dimension and converts to the canonical unit of that dimension:
/// µm, s, W, Hz, dB/cm, µm², m²/W. Bare numbers are rejected unless dim is None.
double parse_quantity(std::string_view text, Dim dim);

/// Either a wavelength (µm) or a frequency (Hz); filters accept both.
struct Spectral {
    bool is_frequency = false;
    double value = 0.0; // µm or Hz

    bool operator==(const Spectral&) const = default;
};

Spectral parse_spectral(std::string_view text);

struct CustomMaterial {
    std::string name;
    std::optional<double> constant_index;
    std::vector<materials::SellmeierTerm> sellmeier; // C in µm²
    double valid_min_um = 0.0;
    double valid_max_um = 0.0;
    std::optional<double> n2_m2_per_w;
    std::optional<double> absorption_db_cm;

    bool operator==(const CustomMaterial&) const = default;
};

struct PumpConfig {
    double lambda_um = 0.0;
    double duration_s = 0.0;
    std::optional<double> peak_power_w;
    std::optional<double> mean_power_w;
    double rep_rate_hz = 0.0;
    PulseShape shape = PulseShape::Sech;

    bool operator==(const PumpConfig&) const = default;
};

struct FilterConfig {
    std::optional<Spectral> signal_center; // empty: centre on the phase-matched signal
    std::optional<Spectral> idler_center;
    Spectral signal_bandwidth{true, 1e12};
    Spectral idler_bandwidth{true, 1e12};

    bool operator==(const FilterConfig&) const = default;
};

struct ComputeConfig {
    double grid_step_um = 0.02;
    double lambda_min_um = 1.40;
    double lambda_max_um = 4.20;
    double lambda_step_um = 0.05;
    bool refine = true;
    double fine_step_um = 0.01;
    double fine_halfwidth_um = 0.1;
    std::string cache;
    int threads = 1;
    double pgp_tolerance = 0.01;
    int pgp_resolution = 512;
    int jsd_resolution = 512;
    modes::OverlapForm overlap = modes::OverlapForm::DominantComponent;

    bool operator==(const ComputeConfig&) const = default;
};

struct DesignConfig {
    std::optional<double> target_signal_um;
    double idler_min_um = design::kCBand.lo_um;
    double idler_max_um = design::kCBand.hi_um;
    design::Range pump{2.00, 2.30, 0.005};
    design::Range width{1.80, 2.60, 0.01};
    design::Range height{0.60, 0.80, 0.01};
    double delta_um = 0.01;

    bool operator==(const DesignConfig&) const = default;
};

struct OutputConfig {
    std::string dir;
    bool csv = false;

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    std::string name;
    std::optional<modes::WaveguideGeometry> geometry;
    std::optional<modes::FiberGeometry> fiber;
    materials::MixingRule pcf_mixing = materials::MixingRule::IndexMean;
    std::vector<CustomMaterial> materials;
    PumpConfig pump;
    FilterConfig filters;
    DetectionChain chain;
    ComputeConfig compute;
    DesignConfig design;
    OutputConfig outputs;

    bool operator==(const RunConfig&) const = default;

    /// Throws Config when the sections are inconsistent (both or neither of
    /// geometry/fiber, both or neither of peak/mean power, …).
    void validate() const;
    double peak_power_w() const;
    PumpPulse pulse() const;
    materials::Library library() const;
};

RunConfig parse(std::string_view text, std::string_view origin = "<config>");
RunConfig load(const std::string& path);
std::string serialize(const RunConfig& cfg);

/// Built-in scenarios: wCH4, wNO2, wCOM, alibart. Throws Config otherwise.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

} // namespace sfwm::config
