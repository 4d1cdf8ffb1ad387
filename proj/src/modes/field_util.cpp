#include "field_util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace sfwm::modes::detail {

std::vector<Region> rect_regions(const Grid& grid, double width_um, double height_um) {
    std::vector<Region> out(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double y = grid.y(j);
            Region r = Region::Cladding;
            if (std::abs(x) < 0.5 * width_um && std::abs(y) < 0.5 * height_um)
                r = Region::Core;
            else if (y < -0.5 * height_um)
                r = Region::Box;
            out[grid.index(i, j)] = r;
        }
    return out;
}

ModeField unfold_field(const FdMode& mode, int nx_local, int ny_local, const Grid& full, const Unfold& u) {
    ModeField f;
    f.grid = full;
    const std::size_t n = full.size();
    f.ex.assign(n, 0.0);
    f.ey.assign(n, 0.0);
    f.ez.assign(n, 0.0);
    f.hx.assign(n, 0.0);
    f.hy.assign(n, 0.0);
    f.hz.assign(n, 0.0);

    // Parity of each component under the mirror, from the wall type s = ∓1:
    // normal E and tangential H flip with −s, tangential E and normal H with s.
    const double sx = u.x_wall == Wall::Electric ? -1.0 : 1.0;
    const double sy = u.y_wall == Wall::Electric ? -1.0 : 1.0;
    const int hx_half = u.mirror_x ? full.nx / 2 : 0;
    const int hy_half = u.mirror_y ? full.ny / 2 : 0;

    for (int J = 0; J < full.ny; ++J)
        for (int I = 0; I < full.nx; ++I) {
            int i = I - hx_half;
            int j = J - hy_half;
            bool mx = false;
            bool my = false;
            if (i < 0) {
                i = -1 - i;
                mx = true;
            }
            if (j < 0) {
                j = -1 - j;
                my = true;
            }
            if (i >= nx_local || j >= ny_local)
                continue;
            const std::size_t src = static_cast<std::size_t>(j) * nx_local + i;
            const std::size_t dst = full.index(I, J);
            auto par = [&](double ex_par, double ey_par) {
                return (mx ? ex_par : 1.0) * (my ? ey_par : 1.0);
            };
            f.ex[dst] = par(-sx, sy) * mode.ex[src];
            f.ey[dst] = par(sx, -sy) * mode.ey[src];
            f.ez[dst] = par(sx, sy) * mode.ez[src];
            f.hx[dst] = par(sx, -sy) * mode.hx[src];
            f.hy[dst] = par(-sx, sy) * mode.hy[src];
            f.hz[dst] = par(-sx, -sy) * mode.hz[src];
        }
    return f;
}

double te_fraction(const ModeField& f) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = 0; k < f.ex.size(); ++k) {
        sx += std::norm(f.ex[k]);
        sy += std::norm(f.ey[k]);
    }
    return sx + sy > 0.0 ? sx / (sx + sy) : 0.0;
}

namespace {

int crossings(const std::vector<double>& v) {
    double peak = 0.0;
    for (double a : v)
        peak = std::max(peak, std::abs(a));
    int count = 0;
    int last = 0;
    for (double a : v) {
        if (std::abs(a) < 1e-3 * peak)
            continue;
        const int s = a > 0.0 ? 1 : -1;
        if (last != 0 && s != last)
            ++count;
        last = s;
    }
    return count;
}

int centre_index(int n, double origin, double step) {
    // Cell whose centre is nearest to coordinate 0, preferring the upper one.
    const double t = -origin / step - 0.5;
    return std::clamp(static_cast<int>(std::floor(t + 0.5)), 0, n - 1);
}

} // namespace

int nodal_crossings(const ModeField& f, bool dominant_x) {
    const Grid& g = f.grid;
    const auto& comp = dominant_x ? f.ex : f.ey;
    const int ic = centre_index(g.nx, g.x0_um, g.dx_um);
    const int jc = centre_index(g.ny, g.y0_um, g.dy_um);
    std::vector<double> row(static_cast<std::size_t>(g.nx));
    for (int i = 0; i < g.nx; ++i)
        row[static_cast<std::size_t>(i)] = comp[g.index(i, jc)].real();
    std::vector<double> col(static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j)
        col[static_cast<std::size_t>(j)] = comp[g.index(ic, j)].real();
    return crossings(row) + crossings(col);
}

void normalize(ModeField& f, bool dominant_x) {
    const double da = f.grid.dx_um * f.grid.dy_um;
    double power = 0.0;
    for (std::size_t k = 0; k < f.ex.size(); ++k)
        power += (std::norm(f.ex[k]) + std::norm(f.ey[k])) * da;
    const auto& comp = dominant_x ? f.ex : f.ey;
    std::size_t kmax = 0;
    for (std::size_t k = 1; k < comp.size(); ++k)
        if (std::abs(comp[k]) > std::abs(comp[kmax]))
            kmax = k;
    std::complex<double> phase = 1.0;
    if (std::abs(comp[kmax]) > 0.0)
        phase = std::conj(comp[kmax]) / std::abs(comp[kmax]);
    const std::complex<double> scale = phase / std::sqrt(power);
    for (auto* v : {&f.ex, &f.ey, &f.ez, &f.hx, &f.hy, &f.hz})
        for (auto& a : *v)
            a *= scale;
}

double boundary_ratio(const ModeField& f) {
    const Grid& g = f.grid;
    auto intensity = [&](std::size_t k) { return std::norm(f.ex[k]) + std::norm(f.ey[k]) + std::norm(f.ez[k]); };
    double peak = 0.0;
    for (std::size_t k = 0; k < f.ex.size(); ++k)
        peak = std::max(peak, intensity(k));
    if (!(peak > 0.0))
        return 0.0;
    double edge = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        edge = std::max(edge, intensity(g.index(i, 0)));
        edge = std::max(edge, intensity(g.index(i, g.ny - 1)));
    }
    for (int j = 0; j < g.ny; ++j) {
        edge = std::max(edge, intensity(g.index(0, j)));
        edge = std::max(edge, intensity(g.index(g.nx - 1, j)));
    }
    return edge / peak;
}

} // namespace sfwm::modes::detail
