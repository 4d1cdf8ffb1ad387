#pragma once

#include "sfwm/dispersion.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sfwm::design {

struct PhaseMatchPoint {
    double lambda_p_um = 0.0;
    double lambda_s_um = 0.0;
    double lambda_i_um = 0.0;
    double residual = 0.0; // Δβ at the root, rad/m
};

struct PhaseMatchOptions {
    double scan_step_thz = 0.2;
    double exclusion_thz = 0.1; // around the degenerate root ω_s = ω_p
    double tolerance = 0.1;     // rad/m
};

/// Non-degenerate phase-matched pairs with λ_s > λ_p, sorted by signal
/// wavelength. Throws NoRoot when there are none.
std::vector<PhaseMatchPoint> phase_match_solve(const dispersion::DispersionCurve& curve, double lambda_p_um,
                                               const PhaseMatchOptions& opts = {});

struct Band {
    double lo_um;
    double hi_um;
    bool contains(double l) const { return l >= lo_um && l <= hi_um; }
};

inline constexpr Band kCBand{1.530, 1.565};

struct CurveEntry {
    double lambda_p_um;
    std::vector<PhaseMatchPoint> points; // empty: no root at this pump
};

/// phase_match_solve over lo..hi (inclusive) in steps of `step`. Pumps
/// without a root are kept with an empty list. With an idler band, points
/// whose idler falls outside it are dropped.
std::vector<CurveEntry> phase_match_curve(const dispersion::DispersionCurve& curve, double lo_um, double hi_um,
                                          double step_um, std::optional<Band> idler_band = std::nullopt,
                                          const PhaseMatchOptions& opts = {});

void write_curve_csv(std::ostream& os, const std::vector<CurveEntry>& entries);

/// Root whose signal lies nearest `target_um`; throws NoRoot if none.
PhaseMatchPoint nearest_root(const dispersion::DispersionCurve& curve, double lambda_p_um, double target_um,
                             const PhaseMatchOptions& opts = {});

struct RetuneOptions {
    double search_halfwidth_um = 0.025;
    double scan_step_um = 0.001;
    double tolerance_um = 0.0005;
};

/// Pump wavelength within ±25 nm of the guess at which the phase-matched
/// signal equals the target within 0.5 nm. Throws NoRoot.
double pump_retune(const dispersion::DispersionCurve& curve, double target_signal_um, double guess_pump_um,
                   const RetuneOptions& opts = {}, const PhaseMatchOptions& pm = {});

using CurveBuilder = std::function<dispersion::DispersionCurve(const modes::WaveguideGeometry&)>;

struct ToleranceRow {
    std::string label;                 // e.g. "a+0.010um"
    modes::WaveguideGeometry geometry; // perturbed
    PhaseMatchPoint drift;             // at the nominal pump
    PhaseMatchPoint retuned;           // after pump_retune
};

/// Perturbs width and height by ±delta (four cases, in the order a+, a−, b+,
/// b−), re-solves phase matching at the nominal pump and re-tunes the pump to
/// restore the target signal.
std::vector<ToleranceRow> tolerance_sweep(const modes::WaveguideGeometry& nominal, double target_signal_um,
                                          double pump_um, const CurveBuilder& build, double delta_um = 0.01,
                                          const RetuneOptions& retune = {}, const PhaseMatchOptions& pm = {});

struct Range {
    double lo;
    double hi;
    double step;
    std::vector<double> values() const;
    bool operator==(const Range&) const = default;
};

struct DesignTarget {
    double signal_um = 0.0;
    Band idler_band = kCBand;
    Range pump{2.00, 2.30, 0.005};
    Range width{1.80, 2.60, 0.01};
    Range height{0.60, 0.80, 0.01};
};

struct Candidate {
    modes::WaveguideGeometry geometry;
    PhaseMatchPoint point;
    double score_um; // |λ_s − target|
};

struct GridSearchOptions {
    modes::WaveguideGeometry base;  // materials, padding, length
    dispersion::BuildOptions build; // solver options and cache
    bool refine = true;             // 10 nm sampling near the best root
    double coarse_step_um = 0.05;
    double fine_step_um = 0.01;
    double fine_halfwidth_um = 0.1;
    PhaseMatchOptions pm;
};

/// Ranks every (a, b) of the target grid by its best idler-band-respecting
/// signal distance from the target. Ties resolve by (a, b). Throws
/// EmptyResult when no candidate satisfies the idler band.
std::vector<Candidate> grid_search(const DesignTarget& target, const materials::Library& lib,
                                   const GridSearchOptions& opts = {});

} // namespace sfwm::design
