#include "sfwm/error.hpp"
#include "sfwm/fd_operator.hpp"
#include "sfwm/modes.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sfwm;
using namespace sfwm::modes;

namespace {

constexpr double kPi = std::numbers::pi;

// Symmetric TE slab, even mode: κ tan(κt/2) = γ. Plain bisection on n_eff.
double slab_oracle(double n1, double n2, double t, double lambda) {
    const double k0 = 2.0 * kPi / lambda;
    auto f = [&](double n) {
        const double kappa = k0 * std::sqrt(n1 * n1 - n * n);
        const double gam = k0 * std::sqrt(n * n - n2 * n2);
        return kappa * std::sin(kappa * t / 2.0) - gam * std::cos(kappa * t / 2.0);
    };
    // The fundamental lies above the first zero of cos(κt/2).
    const double n_cut = std::sqrt(std::max(n2 * n2, n1 * n1 - std::pow(kPi / (k0 * t), 2)));
    double lo = n_cut + 1e-12, hi = n1 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        ((f(m) < 0.0) == (f(lo) < 0.0) ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

// Scalar LP01 mode of a weakly guiding fibre: u J1/J0 = w K1/K0.
double lp01_oracle(double n1, double n2, double a, double lambda) {
    const double v = 2.0 * kPi / lambda * a * std::sqrt(n1 * n1 - n2 * n2);
    auto g = [&](double u) {
        const double w = std::sqrt(v * v - u * u);
        return u * std::cyl_bessel_j(1.0, u) / std::cyl_bessel_j(0.0, u) - w * std::cyl_bessel_k(1.0, w) / std::cyl_bessel_k(0.0, w);
    };
    double lo = 1e-6, hi = std::min(v, 2.404825557695773) - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        ((g(m) < 0.0) == (g(lo) < 0.0) ? lo : hi) = m;
    }
    const double u = 0.5 * (lo + hi);
    const double b = 1.0 - u * u / (v * v);
    return std::sqrt(n2 * n2 + b * (n1 * n1 - n2 * n2));
}

// Textbook HE11 eigenvalue equation evaluated with the standard library
// Bessel functions, as a second route to the solver's residual.
double he11_textbook(double n1, double n2, double a, double lambda, double n_eff) {
    const double k0 = 2.0 * kPi / lambda;
    const double u = a * k0 * std::sqrt(n1 * n1 - n_eff * n_eff);
    const double w = a * k0 * std::sqrt(n_eff * n_eff - n2 * n2);
    const double jp = 0.5 * (std::cyl_bessel_j(0.0, u) - std::cyl_bessel_j(2.0, u));
    const double kp = -0.5 * (std::cyl_bessel_k(0.0, w) + std::cyl_bessel_k(2.0, w));
    const double tj = jp / (u * std::cyl_bessel_j(1.0, u));
    const double tk = kp / (w * std::cyl_bessel_k(1.0, w));
    const double lhs = (tj + tk) * (tj + n2 * n2 / (n1 * n1) * tk);
    const double s = 1.0 / (u * u) + 1.0 / (w * w);
    const double rhs = std::pow(n_eff / n1, 2) * s * s;
    return (lhs - rhs) / rhs;
}

ModeSolution synthetic(int n, double h, auto field) {
    ModeSolution s;
    s.field.grid = Grid{n, n, h, h, -0.5 * n * h, -0.5 * n * h};
    const auto& g = s.field.grid;
    const std::size_t sz = g.size();
    s.field.ex.assign(sz, 0.0);
    s.field.ey.assign(sz, 0.0);
    s.field.ez.assign(sz, 0.0);
    s.field.hx.assign(sz, 0.0);
    s.field.hy.assign(sz, 0.0);
    s.field.hz.assign(sz, 0.0);
    s.field.region.assign(sz, Region::Cladding);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double e = field(g.x(i), g.y(j));
            s.field.ex[g.index(i, j)] = e;
            s.field.hy[g.index(i, j)] = e;
        }
    return s;
}

} // namespace

TEST_CASE("slab solver agrees with an independent bisection") {
    for (auto [n1, n2, t, l] : {std::tuple{3.48, 1.444, 0.22, 1.55}, std::tuple{1.5, 1.45, 2.0, 1.0},
                                std::tuple{3.45, 1.0, 0.5, 3.9}}) {
        const double n = solve_slab_mode(n1, n2, t, l);
        CHECK(n == doctest::Approx(slab_oracle(n1, n2, t, l)).epsilon(1e-11));
        CHECK(std::abs(slab_residual(n, n1, n2, n2, t, l)) < 1e-10);
    }
}

TEST_CASE("asymmetric slab below cutoff has no guided mode") {
    try {
        solve_slab_mode(1.46, 1.0, 1.45, 0.05, 1.55);
        FAIL("expected NoGuidedMode");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoGuidedMode);
    }
}

TEST_CASE("finite-difference solver converges to the slab at second order") {
    const double lam = 1.55, t = 0.22, n1 = 3.48, n2 = 1.444;
    const double ref = slab_oracle(n1, n2, t, lam);
    std::vector<double> err;
    for (double h : {0.02, 0.01, 0.005, 0.0025}) {
        FdProblem p;
        p.nx = 4;
        const int nc = static_cast<int>(std::lround(t / h));
        const int pad = static_cast<int>(std::lround(1.5 / h));
        p.ny = nc + 2 * pad;
        p.dx_um = h;
        p.dy_um = h;
        p.eps.resize(static_cast<std::size_t>(p.nx * p.ny));
        for (int j = 0; j < p.ny; ++j)
            for (int i = 0; i < p.nx; ++i)
                p.eps[static_cast<std::size_t>(j * p.nx + i)] = (j >= pad && j < pad + nc) ? n1 * n1 : n2 * n2;
        const auto modes = solve_fd_modes(p, lam, n1);
        REQUIRE(!modes.empty());
        err.push_back(std::abs(modes.front().n_eff - ref));
    }
    for (std::size_t k = 1; k < err.size(); ++k) {
        const double order = std::log2(err[k - 1] / err[k]);
        INFO("refinement " << k << " order " << order);
        CHECK(order >= 1.5);
    }
    CHECK(err.back() < 1e-4);
}

TEST_CASE("HE11 root satisfies the characteristic equation") {
    for (auto [n1, n2, a, l] : {std::tuple{1.4553, 1.0455, 0.965, 0.7084}, std::tuple{1.45, 1.44, 4.1, 1.55},
                                std::tuple{3.4, 1.44, 0.3, 1.55}, std::tuple{1.46, 1.0, 0.5, 0.6}}) {
        const He11Root r = solve_he11(n1, n2, a, l);
        CHECK(std::abs(r.residual) < 1e-12);
        CHECK(std::abs(he11_characteristic(r.u, r.v, n1, n2)) < 1e-12);
        CHECK(std::abs(he11_textbook(n1, n2, a, l, r.n_eff)) < 1e-8);
        CHECK(r.n_eff > n2);
        CHECK(r.n_eff < n1);
        CHECK(r.u * r.u + r.w * r.w == doctest::Approx(r.v * r.v).epsilon(1e-12));
    }
}

TEST_CASE("weak guidance: HE11 reduces to the scalar LP01 mode") {
    const double n1 = 1.4500, n2 = 1.4470, a = 4.0, l = 1.55;
    CHECK(solve_he11(n1, n2, a, l).n_eff == doctest::Approx(lp01_oracle(n1, n2, a, l)).epsilon(2e-6));
}

TEST_CASE("fibre mode field: n_eff, normalisation and interface conditions") {
    materials::Library lib;
    FiberGeometry fg;
    fg.core_radius_um = 0.965;
    const double l = 0.7084;
    const auto sol = solve_fiber_mode(fg, lib, l);
    const double n1 = lib.get("silica")->refractive_index(l);
    const double n2 = lib.get("pcf_cladding_90")->refractive_index(l);
    CHECK(sol.n_eff == doctest::Approx(solve_he11(n1, n2, 0.965, l).n_eff).epsilon(1e-14));
    CHECK(sol.te_fraction > 0.95);
    CHECK(sol.boundary_ratio < 1e-6);

    const auto& f = sol.field;
    const auto& g = f.grid;
    double norm = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        norm += (std::norm(f.ex[k]) + std::norm(f.ey[k])) * g.dx_um * g.dy_um;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));

    // Cells straddling r = a along the axes: E_x is tangential on the y axis
    // (continuous) and normal on the x axis (n²E_x continuous). Values are
    // extrapolated linearly from two cells on each side.
    const int ic = g.nx / 2;
    const int jc = g.ny / 2;
    auto on_x = [&](int i) { return f.ex[g.index(i, jc)].real(); };
    auto on_y = [&](int j) { return f.ex[g.index(ic, j)].real(); };
    auto side_values = [&](auto sample, auto coord, int n_cells) {
        int k_in = 0;
        for (int k = n_cells / 2; k < n_cells; ++k)
            if (coord(k) < fg.core_radius_um)
                k_in = k;
        const double a = fg.core_radius_um;
        const double in = sample(k_in) + (sample(k_in) - sample(k_in - 1)) / (coord(k_in) - coord(k_in - 1)) *
                                             (a - coord(k_in));
        const double out = sample(k_in + 1) - (sample(k_in + 2) - sample(k_in + 1)) /
                                                  (coord(k_in + 2) - coord(k_in + 1)) * (coord(k_in + 1) - a);
        return std::pair{in, out};
    };
    const auto [xin, xout] = side_values(on_x, [&](int i) { return g.x(i); }, g.nx);
    CHECK(n1 * n1 * xin == doctest::Approx(n2 * n2 * xout).epsilon(0.03));
    const auto [yin, yout] = side_values(on_y, [&](int j) { return g.y(j); }, g.ny);
    CHECK(yin == doctest::Approx(yout).epsilon(0.03));
}

TEST_CASE("effective area of analytic test fields") {
    // E = exp(−2r²/w²): ∬|E|² = πw²/4 and ∬|E|⁴ = πw²/8, so A = πw²/2.
    const double w = 1.0;
    const auto gauss = synthetic(400, 0.02, [&](double x, double y) { return std::exp(-2.0 * (x * x + y * y) / (w * w)); });
    CHECK(effective_area(gauss.field) == doctest::Approx(kPi * w * w / 2.0 * 1e-12).epsilon(1e-6));

    // Uniform field on a 1.2 × 0.8 rectangle: A equals the covered area.
    const auto flat = synthetic(200, 0.02, [](double x, double y) {
        return (std::abs(x) < 0.6 && std::abs(y) < 0.4) ? 1.0 : 0.0;
    });
    CHECK(effective_area(flat.field) == doctest::Approx(1.2 * 0.8 * 1e-12).epsilon(1e-9));
}

TEST_CASE("overlap of three identical fields is the inverse effective area") {
    auto s = synthetic(300, 0.02, [](double x, double y) { return std::exp(-(x * x / 0.8 + y * y / 0.3)); });
    s.polarization = Polarization::TE;
    const double f = overlap_integral(s, s, s);
    CHECK(f == doctest::Approx(1.0 / effective_area(s.field)).epsilon(1e-12));
    CHECK(overlap_integral(s, s, s, OverlapForm::TransverseVector) == doctest::Approx(f).epsilon(1e-12));

    auto other = synthetic(301, 0.02, [](double, double) { return 1.0; });
    try {
        overlap_integral(s, other, s);
        FAIL("expected GridMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridMismatch);
    }
}

TEST_CASE("power fractions from Poynting flux") {
    auto s = synthetic(100, 0.02, [](double, double) { return 1.0; });
    for (std::size_t k = 0; k < s.field.region.size(); ++k)
        s.field.region[k] = k < 2500 ? Region::Box : (k < 5000 ? Region::Core : Region::Cladding);
    const auto pf = power_fractions(s.field);
    CHECK(pf.box == doctest::Approx(0.25));
    CHECK(pf.core == doctest::Approx(0.25));
    CHECK(pf.cladding == doctest::Approx(0.5));
}

TEST_CASE("rectangular strip: symmetry reduction does not change the mode") {
    materials::Library lib;
    WaveguideGeometry g;
    g.width_um = 0.8;
    g.height_um = 0.32;
    g.padding_um = 1.2;
    g.box_thickness_um = 1.2;
    FdOptions full, sym;
    full.grid_step_um = sym.grid_step_um = 0.04;
    full.symmetry = Symmetry::None;
    // The BOX breaks the vertical mirror, so only the x mirror applies here.
    const auto a = solve_rect_mode(g, lib, 1.55, sym);
    const auto b = solve_rect_mode(g, lib, 1.55, full);
    CHECK(a.n_eff == doctest::Approx(b.n_eff).epsilon(1e-9));
    CHECK(a.polarization == Polarization::TE);
    const auto pf = power_fractions(a, g);
    CHECK(pf.core + pf.cladding + pf.box == doctest::Approx(1.0));
    CHECK(pf.core > 0.5);
    const double ncore = lib.get("silicon")->refractive_index(1.55);
    CHECK(a.n_eff < ncore);
    CHECK(a.n_eff > lib.get("silica")->refractive_index(1.55));
}

TEST_CASE("wCOM signal mode power fractions") {
    // Reference split at 3.905 um: 85.3 / 7.4 / 7.3 %.
    materials::Library lib;
    WaveguideGeometry g;
    g.width_um = 2.35;
    g.height_um = 0.65;
    const auto sol = solve_rect_mode(g, lib, 3.905);
    const auto pf = power_fractions(sol, g);
    CHECK(std::abs(pf.core - 0.853) < 0.02);
    CHECK(std::abs(pf.cladding - 0.074) < 0.02);
    CHECK(std::abs(pf.box - 0.073) < 0.02);
    CHECK(sol.boundary_ratio < 1e-6);
}

TEST_CASE("solver input errors") {
    materials::Library lib;
    WaveguideGeometry g;
    g.width_um = 2.0;
    g.height_um = 0.7;
    try {
        solve_rect_mode(g, lib, 9.0);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
    g.width_um = -1.0;
    CHECK_THROWS_AS(solve_rect_mode(g, lib, 2.0), Error);

    // A thin strip at a long wavelength with almost no padding leaks through
    // the window edge.
    WaveguideGeometry leaky;
    leaky.width_um = 0.5;
    leaky.height_um = 0.22;
    leaky.padding_um = 0.2;
    leaky.box_thickness_um = 0.2;
    FdOptions o;
    o.grid_step_um = 0.02;
    try {
        solve_rect_mode(leaky, lib, 2.2, o);
        FAIL("expected a solver error");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::BoundaryLeak || e.code() == ErrorCode::NoGuidedMode));
    }
}
