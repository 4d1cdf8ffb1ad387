#include "field_util.hpp"
#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"
#include "sfwm/fd_operator.hpp"
#include "sfwm/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfwm::modes {

void WaveguideGeometry::validate() const {
    if (!(width_um > 0.0) || !(height_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "core width and height must be positive");
    if (!(length_m > 0.0))
        throw Error(ErrorCode::InvalidArgument, "waveguide length must be positive");
    if (!(padding_um > 0.0) || !(box_thickness_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "padding and BOX thickness must be positive");
}

std::string WaveguideGeometry::canonical() const {
    std::ostringstream os;
    os.precision(10);
    os << "rect;a=" << width_um << ";b=" << height_um << ";core=" << core << ";clad=" << cladding << ";box=" << box
       << ";tbox=" << box_thickness_um << ";pad=" << padding_um << ";L=" << length_m;
    return os.str();
}

namespace {

struct Layout {
    Grid full;
    int core_cells_x;
    int core_cells_y;
    int pad_x;
    int pad_top;
    int pad_bottom;
};

Layout make_layout(const WaveguideGeometry& g, double step) {
    if (!(step > 0.0))
        throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
    Layout l{};
    // Even cell counts across the core put its centre lines on mesh nodes.
    l.core_cells_x = std::max(2, 2 * static_cast<int>(std::lround(g.width_um / (2.0 * step))));
    l.core_cells_y = std::max(2, 2 * static_cast<int>(std::lround(g.height_um / (2.0 * step))));
    const double dx = g.width_um / l.core_cells_x;
    const double dy = g.height_um / l.core_cells_y;
    l.pad_x = std::max(1, static_cast<int>(std::lround(g.padding_um / dx)));
    l.pad_top = std::max(1, static_cast<int>(std::lround(g.padding_um / dy)));
    l.pad_bottom = std::max(1, static_cast<int>(std::lround(g.box_thickness_um / dy)));
    l.full.nx = l.core_cells_x + 2 * l.pad_x;
    l.full.ny = l.core_cells_y + l.pad_top + l.pad_bottom;
    l.full.dx_um = dx;
    l.full.dy_um = dy;
    l.full.x0_um = -0.5 * g.width_um - l.pad_x * dx;
    l.full.y0_um = -0.5 * g.height_um - l.pad_bottom * dy;
    return l;
}

} // namespace

Grid rect_grid(const WaveguideGeometry& geom, const FdOptions& opts) {
    geom.validate();
    return make_layout(geom, opts.grid_step_um).full;
}

ModeSolution solve_rect_mode(const WaveguideGeometry& geom, const materials::Library& lib, double lambda_um,
                             const FdOptions& opts) {
    geom.validate();
    const Layout lay = make_layout(geom, opts.grid_step_um);
    const Grid& full = lay.full;

    const double n_core = lib.get(geom.core)->refractive_index(lambda_um);
    const double n_clad = lib.get(geom.cladding)->refractive_index(lambda_um);
    const double n_box = lib.get(geom.box)->refractive_index(lambda_um);
    const double n_out = std::max(n_clad, n_box);
    if (!(n_core > n_out))
        throw Error(ErrorCode::NoGuidedMode, "core index does not exceed the surrounding indices");

    const std::vector<Region> regions = detail::rect_regions(full, geom.width_um, geom.height_um);

    const bool sym_x = opts.symmetry == Symmetry::Auto;
    const bool sym_y = sym_x && geom.cladding == geom.box && lay.pad_top == lay.pad_bottom;

    FdProblem prob;
    prob.dx_um = full.dx_um;
    prob.dy_um = full.dy_um;
    prob.nx = sym_x ? full.nx / 2 : full.nx;
    prob.ny = sym_y ? full.ny / 2 : full.ny;
    const int i_off = sym_x ? full.nx / 2 : 0;
    const int j_off = sym_y ? full.ny / 2 : 0;
    // TE-like fundamental: E_x even about both mirror planes.
    prob.left = Wall::Electric;
    prob.bottom = sym_y ? Wall::Magnetic : Wall::Electric;
    prob.eps.resize(static_cast<std::size_t>(prob.nx) * prob.ny);
    for (int j = 0; j < prob.ny; ++j)
        for (int i = 0; i < prob.nx; ++i) {
            const Region r = regions[full.index(i + i_off, j + j_off)];
            const double n = r == Region::Core ? n_core : (r == Region::Box ? n_box : n_clad);
            prob.eps[static_cast<std::size_t>(j) * prob.nx + i] = n * n;
        }

    FdSolveOptions so;
    so.nev = opts.nev;
    so.krylov_dim = opts.krylov_dim;
    so.max_restarts = opts.max_restarts;
    so.tolerance = opts.tolerance;
    const std::vector<FdMode> modes = solve_fd_modes(prob, lambda_um, n_core, so);

    const detail::Unfold unfold{sym_x, sym_y, prob.left, prob.bottom};
    for (const FdMode& m : modes) {
        if (!(m.n_eff > n_out && m.n_eff < n_core))
            continue;
        ModeField field = detail::unfold_field(m, prob.nx, prob.ny, full, unfold);
        field.region = regions;
        const double te = detail::te_fraction(field);
        if (te <= 0.5)
            continue;
        if (detail::nodal_crossings(field, true) != 0)
            continue;
        detail::normalize(field, true);
        ModeSolution sol;
        sol.wavelength_um = lambda_um;
        sol.n_eff = m.n_eff;
        sol.polarization = Polarization::TE;
        sol.te_fraction = te;
        sol.boundary_ratio = detail::boundary_ratio(field);
        sol.field = std::move(field);
        if (sol.boundary_ratio > opts.boundary_threshold) {
            std::ostringstream os;
            os << "edge intensity ratio " << sol.boundary_ratio << " exceeds " << opts.boundary_threshold
               << " at " << lambda_um << " um; enlarge the padding";
            throw Error(ErrorCode::BoundaryLeak, os.str());
        }
        return sol;
    }
    throw Error(ErrorCode::NoGuidedMode, "no guided TE-like fundamental mode found");
}

} // namespace sfwm::modes
