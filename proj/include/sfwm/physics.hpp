#pragma once

#include "sfwm/dispersion.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sfwm {

enum class PulseShape { Sech, Gaussian };

/// Pump pulse train. `duration_s` is the sech parameter T₀ in the spectral
/// density and the pulse width τ in the mean-to-peak power conversion.
struct PumpPulse {
    double lambda_um = 0.0;
    double duration_s = 0.0;
    double peak_power_w = 0.0;
    double rep_rate_hz = 0.0;
    PulseShape shape = PulseShape::Sech;

    double omega() const;
    /// 2·P_p·T₀
    double energy_j() const { return 2.0 * peak_power_w * duration_s; }
    void validate() const;
};

/// Ideal rectangular passband, angular frequencies in rad/s (full width).
struct FilterSpec {
    double center_omega = 0.0;
    double bandwidth_omega = 0.0;

    static FilterSpec from_wavelength(double center_um, double bandwidth_um);
    static FilterSpec from_frequency(double center_thz, double bandwidth_thz);
    double lo() const { return center_omega - 0.5 * bandwidth_omega; }
    double hi() const { return center_omega + 0.5 * bandwidth_omega; }
    void validate() const;
};

struct DetectionChain {
    double mu_s = 1.0;
    double mu_i = 1.0;
    double eta_s = 1.0;
    double eta_i = 1.0;

    double factor() const { return mu_s * mu_i * eta_s * eta_i; }
    bool operator==(const DetectionChain&) const = default;
    void validate() const;
};

/// γ = 2π n₂ f_ppsi / λ_p  (W⁻¹ m⁻¹)
double gamma(double n2_m2_per_w, double overlap_m2, double lambda_p_um);

/// 2β(ω_p) − β(ω_s) − β(ω_i) in rad/m.
double phase_mismatch(const dispersion::DispersionCurve& curve, double wp, double ws, double wi);

double jsd_factor_A(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
                    double ws, double wi);
/// ((πT₀x/2)/sinh(πT₀x/2))² with x = ω_s + ω_i − 2ω_p.
double jsd_factor_G(const PumpPulse& pulse, double ws, double wi, double wp);
double jsd_factor_G(double t0_s, double x);
double jsd_factor_F(const dispersion::DispersionCurve& curve, double length_m, double wp, double ws, double wi);

/// sin(u)/u with the removable singularity filled in.
double sinc(double u);

struct OmegaWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// |ζ_2D(ω_s, ω_i)|² sampled on a uniform grid (units s²).
struct JsdGrid {
    std::vector<double> ws; // signal axis, rad/s
    std::vector<double> wi; // idler axis, rad/s
    std::vector<double> values; // values[s * wi.size() + i]
    double pump_lambda_um = 0.0;
    double gamma = 0.0;
    double length_m = 0.0;
    std::string curve_hash;

    double at(std::size_t s, std::size_t i) const { return values[s * wi.size() + i]; }
    void write_csv(std::ostream& os) const;
};

JsdGrid jsd(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
            const OmegaWindow& signal, const OmegaWindow& idler, int n_signal = 512, int n_idler = 512);

/// The default display window: filter centre ± 1.5 × bandwidth.
OmegaWindow window_around(const FilterSpec& f);

struct PgpResult {
    double pgp = 0.0;
    double peak_signal_um = 0.0;
    double peak_idler_um = 0.0;
    int resolution = 0;
    double error_estimate = 0.0;
};

/// Trapezoidal integral of a sampled grid over the filter rectangle (the
/// piecewise-bilinear interpolant is integrated exactly where a passband edge
/// cuts a cell). Throws FilterOutsideGrid.
PgpResult pgp(const JsdGrid& grid, const FilterSpec& signal, const FilterSpec& idler);

struct PgpOptions {
    int initial_resolution = 512;
    int max_levels = 5;
    double rel_tolerance = 0.01;
    /// Half-width of the integrated band across the ω_s + ω_i = 2ω_p ridge in
    /// units of 1/T₀; beyond it G < 1e-10.
    double ridge_halfwidth_t0 = 10.0;
};

/// PGP over the filter rectangle from the analytic spectral density. The
/// composite trapezoid runs on a uniform grid in (ω_s, x = ω_s + ω_i − 2ω_p)
/// and the resolution is doubled until two levels agree within the tolerance;
/// the error estimate is the Richardson difference. Throws
/// QuadratureNotConverged and OutOfRange when a filter leaves the curve span.
PgpResult compute_pgp(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
                      const FilterSpec& signal, const FilterSpec& idler, const PgpOptions& opts = {});

double pgr(double pgp, double rep_rate_hz);
double detected_rate(double pgr, const DetectionChain& chain);

/// P_p = (2/(R·τ))·√(ln2/π)·P_mean
double peak_power_from_mean(double mean_w, double rep_rate_hz, double tau_s);

struct PowerSplit {
    double core;
    double silica;
    double box;
};

/// Fraction of signal power surviving length L (m) with core loss α_si and
/// cladding/BOX loss α_silica (both dB/cm).
double material_attenuation(const PowerSplit& fractions, double alpha_si_db_cm, double alpha_silica_db_cm,
                            double length_m);

/// Raman gain peak and dip wavelengths (µm) for a silicon pump at λ_p.
std::pair<double, double> raman_window(double lambda_p_um);

struct FilterFrequency {
    double center_thz;
    double bandwidth_thz;
};

FilterFrequency filter_to_frequency(double center_nm, double bandwidth_nm);

} // namespace sfwm
