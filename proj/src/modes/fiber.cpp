#include "field_util.hpp"
#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"
#include "sfwm/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sfwm::modes {

void FiberGeometry::validate() const {
    if (!(core_radius_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fibre core radius must be positive");
    if (!(length_m > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fibre length must be positive");
}

std::string FiberGeometry::canonical() const {
    std::ostringstream os;
    os.precision(10);
    os << "fiber;r=" << core_radius_um << ";core=" << core << ";clad=" << cladding << ";L=" << length_m;
    return os.str();
}

namespace {

constexpr double kFirstZeroJ1 = 3.8317059702075123;

double j1_ratio(double u) { // J1'(u) / (u J1(u))
    const double j0 = std::cyl_bessel_j(0.0, u);
    const double j1 = std::cyl_bessel_j(1.0, u);
    return (j0 - j1 / u) / (u * j1);
}

double k1_ratio(double w) { // K1'(w) / (w K1(w))
    const double k0 = std::cyl_bessel_k(0.0, w);
    const double k1 = std::cyl_bessel_k(1.0, w);
    return (-k0 - k1 / w) / (w * k1);
}

} // namespace

// (η1 + η2)(η1 + (n2/n1)² η2) = (β/(k n1))² (1/u² + 1/w²)², scaled by u²w²/V²
// so that both ends of the search interval stay finite.
double he11_characteristic(double u, double v, double n_core, double n_clad) {
    const double w = std::sqrt(std::max(v * v - u * u, 0.0));
    const double k0a = v / std::sqrt(n_core * n_core - n_clad * n_clad);
    const double e1 = j1_ratio(u);
    const double e2 = k1_ratio(w);
    const double r = (n_clad / n_core) * (n_clad / n_core);
    const double b2 = (n_core * n_core - (u / k0a) * (u / k0a)) / (n_core * n_core);
    const double s = 1.0 / (u * u) + 1.0 / (w * w);
    return ((e1 + e2) * (e1 + r * e2) - b2 * s * s) * u * u * w * w / (v * v);
}

He11Root solve_he11(double n_core, double n_clad, double radius_um, double lambda_um) {
    if (!(radius_um > 0.0) || !(lambda_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fibre radius and wavelength must be positive");
    if (!(n_core > n_clad))
        throw Error(ErrorCode::NoGuidedMode, "core index does not exceed cladding index (index inversion)");
    const double k0 = 2.0 * kPi / lambda_um;
    const double v = k0 * radius_um * std::sqrt(n_core * n_core - n_clad * n_clad);
    const double u_max = std::min(v, kFirstZeroJ1) * (1.0 - 1e-9);
    auto f = [&](double u) { return he11_characteristic(u, v, n_core, n_clad); };

    constexpr int kScan = 4000;
    double lo = u_max * 1e-4;
    double flo = f(lo);
    double hi = 0.0;
    bool found = false;
    for (int k = 1; k <= kScan; ++k) {
        const double u = u_max * (1e-4 + (1.0 - 1e-4) * k / kScan);
        const double fu = f(u);
        if (std::isfinite(flo) && std::isfinite(fu) && flo < 0.0 && fu >= 0.0) {
            hi = u;
            found = true;
            break;
        }
        lo = u;
        flo = fu;
    }
    if (!found)
        throw Error(ErrorCode::NoGuidedMode, "HE11 characteristic equation has no root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double u = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
    const double k0a = k0 * radius_um;
    He11Root root;
    root.u = u;
    root.v = v;
    root.w = std::sqrt(v * v - u * u);
    root.n_eff = std::sqrt(n_core * n_core - (u / k0a) * (u / k0a));
    root.residual = std::abs(f(u));
    return root;
}

ModeSolution solve_fiber_mode(const FiberGeometry& geom, const materials::Library& lib, double lambda_um,
                              const FiberOptions& opts) {
    geom.validate();
    const double n1 = lib.get(geom.core)->refractive_index(lambda_um);
    const double n2 = lib.get(geom.cladding)->refractive_index(lambda_um);
    const He11Root root = solve_he11(n1, n2, geom.core_radius_um, lambda_um);

    const double a = geom.core_radius_um;
    const double k0 = 2.0 * kPi / lambda_um;
    const double beta = root.n_eff * k0;
    const double U = root.u;
    const double W = root.w;
    const double kap = U / a;
    const double gam = W / a;
    const double eta = j1_ratio(U) + k1_ratio(W);
    // Amplitudes with E_z = cos φ · {J1(κr)/J1(U), K1(γr)/K1(W)} so E_z is
    // continuous; H_z amplitude fixed by continuity of E_φ and H_φ.
    const double q = -root.n_eff * (1.0 / (U * U) + 1.0 / (W * W)) / eta;
    const double A = 1.0 / std::cyl_bessel_j(1.0, U);
    const double B = q * A;
    const double C = 1.0 / std::cyl_bessel_k(1.0, W);
    const double D = q * C;

    const double half = opts.window_half_width_um > 0.0 ? opts.window_half_width_um : 4.0 * a;
    const double h = opts.grid_step_um;
    if (!(h > 0.0))
        throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
    const int n_half = std::max(2, static_cast<int>(std::ceil(half / h)));

    ModeField f;
    f.grid.nx = 2 * n_half;
    f.grid.ny = 2 * n_half;
    f.grid.dx_um = h;
    f.grid.dy_um = h;
    f.grid.x0_um = -n_half * h;
    f.grid.y0_um = -n_half * h;
    const std::size_t n = f.grid.size();
    for (auto* v : {&f.ex, &f.ey, &f.ez, &f.hx, &f.hy, &f.hz})
        v->assign(n, 0.0);
    f.region.assign(n, Region::Cladding);

    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const double x = f.grid.x(i);
            const double y = f.grid.y(j);
            const double r = std::hypot(x, y);
            const double c = x / r;
            const double s = y / r;
            // Radial/azimuthal amplitudes after a common factor −j, which makes
            // the transverse fields real and E_z, H_z imaginary.
            double er, ephi, hr, hphi, ez, hz;
            if (r < a) {
                const double z = kap * r;
                const double jz = std::cyl_bessel_j(1.0, z);
                const double jdz = std::cyl_bessel_j(0.0, z) - jz / z;
                const double j_over_r = jz / r;
                const double k2 = kap * kap;
                er = -(beta * A * kap * jdz + k0 * B * j_over_r) / k2;
                ephi = (beta * A * j_over_r + k0 * B * kap * jdz) / k2;
                hr = -(beta * B * kap * jdz + k0 * n1 * n1 * A * j_over_r) / k2;
                hphi = -(beta * B * j_over_r + k0 * n1 * n1 * A * kap * jdz) / k2;
                ez = A * jz;
                hz = B * jz;
                f.region[f.grid.index(i, j)] = Region::Core;
            } else {
                const double z = gam * r;
                const double kz = std::cyl_bessel_k(1.0, z);
                const double kdz = -std::cyl_bessel_k(0.0, z) - kz / z;
                const double k_over_r = kz / r;
                const double g2 = gam * gam;
                er = (beta * C * gam * kdz + k0 * D * k_over_r) / g2;
                ephi = -(beta * C * k_over_r + k0 * D * gam * kdz) / g2;
                hr = (beta * D * gam * kdz + k0 * n2 * n2 * C * k_over_r) / g2;
                hphi = (beta * D * k_over_r + k0 * n2 * n2 * C * gam * kdz) / g2;
                ez = C * kz;
                hz = D * kz;
            }
            // Angular dependence: E_r, E_z, H_φ ∝ cos φ; E_φ, H_r, H_z ∝ sin φ.
            const double Er = er * c;
            const double Ephi = ephi * s;
            const double Hr = hr * s;
            const double Hphi = hphi * c;
            const std::size_t k = f.grid.index(i, j);
            f.ex[k] = Er * c - Ephi * s;
            f.ey[k] = Er * s + Ephi * c;
            f.ez[k] = -I * ez * c;
            f.hx[k] = Hr * c - Hphi * s;
            f.hy[k] = Hr * s + Hphi * c;
            f.hz[k] = -I * hz * s;
        }

    ModeSolution sol;
    sol.wavelength_um = lambda_um;
    sol.n_eff = root.n_eff;
    sol.te_fraction = detail::te_fraction(f);
    sol.polarization = Polarization::TE;
    detail::normalize(f, true);
    sol.boundary_ratio = detail::boundary_ratio(f);
    sol.field = std::move(f);
    return sol;
}

} // namespace sfwm::modes
