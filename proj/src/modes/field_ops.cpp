#include "field_util.hpp"
#include "sfwm/error.hpp"
#include "sfwm/modes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace sfwm::modes {

bool Grid::same_as(const Grid& o) const {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a) + std::abs(b)); };
    return nx == o.nx && ny == o.ny && close(dx_um, o.dx_um) && close(dy_um, o.dy_um) && close(x0_um, o.x0_um) &&
           close(y0_um, o.y0_um);
}

namespace {

void check_populated(const ModeField& f) {
    const std::size_t n = f.grid.size();
    if (n == 0 || f.ex.size() != n || f.ey.size() != n || f.hx.size() != n || f.hy.size() != n)
        throw Error(ErrorCode::GridMismatch, "field arrays do not match their grid");
}

} // namespace

PowerFractions power_fractions(const ModeField& field) {
    check_populated(field);
    if (field.region.size() != field.grid.size())
        throw Error(ErrorCode::GridMismatch, "region labels do not match the field grid");
    double core = 0.0, clad = 0.0, box = 0.0;
    for (std::size_t k = 0; k < field.grid.size(); ++k) {
        const double sz = 0.5 * (field.ex[k] * std::conj(field.hy[k]) - field.ey[k] * std::conj(field.hx[k])).real();
        switch (field.region[k]) {
        case Region::Core: core += sz; break;
        case Region::Cladding: clad += sz; break;
        case Region::Box: box += sz; break;
        }
    }
    const double total = core + clad + box;
    if (!(total > 0.0))
        throw Error(ErrorCode::InvalidArgument, "mode carries no forward power");
    return {core / total, clad / total, box / total};
}

PowerFractions power_fractions(const ModeSolution& sol, const WaveguideGeometry& geom) {
    const Grid& g = sol.field.grid;
    // The core faces must fall on cell boundaries or the region sums are biased.
    const double cx = geom.width_um / g.dx_um;
    const double cy = geom.height_um / g.dy_um;
    const double xl = (-0.5 * geom.width_um - g.x0_um) / g.dx_um;
    const double yl = (-0.5 * geom.height_um - g.y0_um) / g.dy_um;
    for (double v : {cx, cy, xl, yl})
        if (std::abs(v - std::round(v)) > 1e-6)
            throw Error(ErrorCode::GridMismatch, "core faces are not aligned with the field grid");
    ModeField labelled = sol.field;
    labelled.region = detail::rect_regions(g, geom.width_um, geom.height_um);
    return power_fractions(labelled);
}

double effective_area(const ModeField& field) {
    check_populated(field);
    const double da = field.grid.dx_um * field.grid.dy_um * 1e-12;
    double i2 = 0.0, i4 = 0.0;
    for (std::size_t k = 0; k < field.grid.size(); ++k) {
        const double e2 = std::norm(field.ex[k]) + std::norm(field.ey[k]);
        i2 += e2 * da;
        i4 += e2 * e2 * da;
    }
    if (!(i4 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "zero field");
    return i2 * i2 / i4;
}

double overlap_integral(const ModeSolution& pump, const ModeSolution& signal, const ModeSolution& idler,
                        OverlapForm form) {
    const ModeField& p = pump.field;
    const ModeField& s = signal.field;
    const ModeField& i = idler.field;
    check_populated(p);
    check_populated(s);
    check_populated(i);
    if (!p.grid.same_as(s.grid) || !p.grid.same_as(i.grid))
        throw Error(ErrorCode::GridMismatch, "pump, signal and idler fields live on different grids");

    const double da = p.grid.dx_um * p.grid.dy_um * 1e-12;
    std::complex<double> num = 0.0;
    double np = 0.0, ns = 0.0, ni = 0.0;
    const bool use_x = pump.polarization == Polarization::TE;
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
        if (form == OverlapForm::DominantComponent) {
            const auto ep = use_x ? p.ex[k] : p.ey[k];
            const auto es = use_x ? s.ex[k] : s.ey[k];
            const auto ei = use_x ? i.ex[k] : i.ey[k];
            num += std::conj(ep) * std::conj(ep) * es * ei * da;
            np += std::norm(ep) * da;
            ns += std::norm(es) * da;
            ni += std::norm(ei) * da;
        } else {
            const auto ps = std::conj(p.ex[k]) * s.ex[k] + std::conj(p.ey[k]) * s.ey[k];
            const auto pi = std::conj(p.ex[k]) * i.ex[k] + std::conj(p.ey[k]) * i.ey[k];
            num += ps * pi * da;
            np += (std::norm(p.ex[k]) + std::norm(p.ey[k])) * da;
            ns += (std::norm(s.ex[k]) + std::norm(s.ey[k])) * da;
            ni += (std::norm(i.ex[k]) + std::norm(i.ey[k])) * da;
        }
    }
    if (!(np > 0.0 && ns > 0.0 && ni > 0.0))
        throw Error(ErrorCode::InvalidArgument, "zero field in overlap");
    return num.real() / std::sqrt(np * np * ns * ni);
}

} // namespace sfwm::modes
