#pragma once

#include "sfwm/materials.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace sfwm::modes {

/// Rectangular silicon-on-insulator strip. The core is centred at the origin;
/// the buried oxide fills everything below the core's bottom face down to
/// box_thickness under it, the cladding everything else inside the window.
struct WaveguideGeometry {
    double width_um = 0.0;
    double height_um = 0.0;
    std::string core = "silicon";
    std::string cladding = "silica";
    std::string box = "silica";
    double box_thickness_um = 2.0;
    double padding_um = 2.0;
    double length_m = 0.02;

    bool operator==(const WaveguideGeometry&) const = default;
    void validate() const;
    /// Stable textual form used for hashing and reports.
    std::string canonical() const;
};

struct FiberGeometry {
    double core_radius_um = 0.0;
    std::string core = "silica";
    std::string cladding = "pcf_cladding_90";
    double length_m = 0.2;

    bool operator==(const FiberGeometry&) const = default;
    void validate() const;
    std::string canonical() const;
};

/// Uniform mesh of cell centres: x_i = x0 + (i + 1/2)·dx, y_j = y0 + (j + 1/2)·dy.
struct Grid {
    int nx = 0;
    int ny = 0;
    double dx_um = 0.0;
    double dy_um = 0.0;
    double x0_um = 0.0;
    double y0_um = 0.0;

    double x(int i) const { return x0_um + (i + 0.5) * dx_um; }
    double y(int j) const { return y0_um + (j + 0.5) * dy_um; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool same_as(const Grid& o) const;
};

enum class Region : std::uint8_t { Core, Cladding, Box };

/// Six field components sampled at the cell centres of `grid`, row-major.
/// Normalised so that ∬|E_t|² dx dy = 1 with dx, dy in µm and the dominant
/// transverse component real and positive at its peak. H is scaled by the
/// vacuum impedance so E and H share units.
struct ModeField {
    Grid grid;
    std::vector<std::complex<double>> ex, ey, ez, hx, hy, hz;
    std::vector<Region> region;
};

enum class Polarization { TE, TM };

struct ModeSolution {
    double wavelength_um = 0.0;
    double n_eff = 0.0;
    ModeField field;
    Polarization polarization = Polarization::TE;
    double te_fraction = 0.0;
    /// Peak-normalised intensity on the outermost ring of the window.
    double boundary_ratio = 0.0;
};

enum class Symmetry {
    Auto, // exploit the mirror planes of the cross-section when present
    None, // always solve the full window
};

struct FdOptions {
    double grid_step_um = 0.02;
    Symmetry symmetry = Symmetry::Auto;
    int nev = 4;
    int krylov_dim = 30;
    int max_restarts = 80;
    double tolerance = 1e-12;
    double boundary_threshold = 1e-6;
};

/// Fundamental TE-like mode of a rectangular strip by full-vector finite
/// differences. Throws NoGuidedMode, NotConverged, BoundaryLeak.
ModeSolution solve_rect_mode(const WaveguideGeometry& geom, const materials::Library& lib, double lambda_um,
                             const FdOptions& opts = {});

/// Grid the solver uses for `geom`; identical for every wavelength.
Grid rect_grid(const WaveguideGeometry& geom, const FdOptions& opts = {});

struct He11Root {
    double n_eff;
    double u;
    double w;
    double v;
    /// Characteristic equation residual, normalised to O(1) terms.
    double residual;
};

/// Root of the exact vector HE11 characteristic equation of a step-index fibre.
He11Root solve_he11(double n_core, double n_clad, double radius_um, double lambda_um);

/// Left-minus-right side of the HE11 eigenvalue equation at normalised
/// transverse wavenumber u (w follows from V), divided by the right side.
double he11_characteristic(double u, double v, double n_core, double n_clad);

struct FiberOptions {
    double window_half_width_um = 0.0; // 0 → 4 × core radius
    double grid_step_um = 0.02;
};

ModeSolution solve_fiber_mode(const FiberGeometry& geom, const materials::Library& lib, double lambda_um,
                              const FiberOptions& opts = {});

/// Fundamental TE mode of a three-layer slab (core between top and bottom
/// claddings). Throws NoGuidedMode when an asymmetric slab is below cutoff.
double solve_slab_mode(double n_core, double n_top, double n_bottom, double thickness_um, double lambda_um);
double solve_slab_mode(double n_core, double n_clad, double thickness_um, double lambda_um);
/// Normalised residual of the TE slab dispersion relation at n_eff.
double slab_residual(double n_eff, double n_core, double n_top, double n_bottom, double thickness_um,
                     double lambda_um);

struct PowerFractions {
    double core = 0.0;
    double cladding = 0.0;
    double box = 0.0;
};

/// Fractions of the z-directed Poynting flux carried in each region.
PowerFractions power_fractions(const ModeSolution& sol, const WaveguideGeometry& geom);
/// Same, using the region labels stored on the field only.
PowerFractions power_fractions(const ModeField& field);

/// (∬|E_t|²)² / ∬|E_t|⁴ in m².
double effective_area(const ModeField& field);

enum class OverlapForm {
    DominantComponent, // E_x for TE-like modes
    TransverseVector,  // (E_p*·E_s)(E_p*·E_i) with transverse vectors
};

/// Four-field overlap f_ppsi in m⁻². Throws GridMismatch when the three
/// fields are not sampled on the same grid.
double overlap_integral(const ModeSolution& pump, const ModeSolution& signal, const ModeSolution& idler,
                        OverlapForm form = OverlapForm::DominantComponent);

} // namespace sfwm::modes
