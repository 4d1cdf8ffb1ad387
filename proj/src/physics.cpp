#include "sfwm/physics.hpp"

#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace sfwm {

double PumpPulse::omega() const { return omega_from_um(lambda_um); }

void PumpPulse::validate() const {
    if (!(lambda_um > 0.0) || !(duration_s > 0.0) || !(rep_rate_hz > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump wavelength, duration and repetition rate must be positive");
    if (!(peak_power_w >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump peak power must be non-negative");
}

FilterSpec FilterSpec::from_wavelength(double center_um, double bandwidth_um) {
    const double nu = kSpeedOfLight / (center_um * 1e-6);
    const double dnu = kSpeedOfLight * bandwidth_um * 1e-6 / (center_um * 1e-6 * center_um * 1e-6);
    return {2.0 * kPi * nu, 2.0 * kPi * dnu};
}

FilterSpec FilterSpec::from_frequency(double center_thz, double bandwidth_thz) {
    return {thz_to_omega(center_thz), thz_to_omega(bandwidth_thz)};
}

void FilterSpec::validate() const {
    if (!(center_omega > 0.0) || !(bandwidth_omega > 0.0) || !(lo() > 0.0))
        throw Error(ErrorCode::InvalidArgument, "filter centre and bandwidth must be positive");
}

void DetectionChain::validate() const {
    for (double v : {mu_s, mu_i, eta_s, eta_i})
        if (!(v >= 0.0 && v <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "coupling and detector efficiencies must lie in [0, 1]");
}

double gamma(double n2_m2_per_w, double overlap_m2, double lambda_p_um) {
    return 2.0 * kPi * n2_m2_per_w * overlap_m2 / (lambda_p_um * 1e-6);
}

double phase_mismatch(const dispersion::DispersionCurve& curve, double wp, double ws, double wi) {
    return 2.0 * curve.beta(wp) - curve.beta(ws) - curve.beta(wi);
}

double jsd_factor_A(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
                    double ws, double wi) {
    const double wp = pulse.omega();
    const double ngp = curve.group_index(wp);
    const double ngs = curve.group_index(ws);
    const double ngi = curve.group_index(wi);
    const double amp = ngp * std::sqrt(ngs * ngi) / (2.0 * kPi) * std::sqrt(ws * wi / (wp * wp)) * gamma * length_m *
                       pulse.energy_j();
    return amp * amp;
}

double jsd_factor_G(double t0_s, double x) {
    const double u = 0.5 * kPi * t0_s * x;
    if (std::abs(u) < 1e-4)
        return 1.0 - u * u / 3.0; // (u/sinh u)² = 1 − u²/3 + O(u⁴)
    if (std::abs(u) > 350.0)
        return 0.0;
    const double r = u / std::sinh(u);
    return r * r;
}

double jsd_factor_G(const PumpPulse& pulse, double ws, double wi, double wp) {
    return jsd_factor_G(pulse.duration_s, ws + wi - 2.0 * wp);
}

double sinc(double u) {
    if (std::abs(u) < 1e-8)
        return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

double jsd_factor_F(const dispersion::DispersionCurve& curve, double length_m, double wp, double ws, double wi) {
    const double x = ws + wi - 2.0 * wp;
    const double arg = (phase_mismatch(curve, wp, ws, wi) + x / curve.group_velocity(wp)) * 0.5 * length_m;
    const double s = sinc(arg);
    return s * s;
}

void JsdGrid::write_csv(std::ostream& os) const {
    os << "omega_s_rad_per_s,omega_i_rad_per_s,jsd_s2\n";
    char buf[96];
    for (std::size_t s = 0; s < ws.size(); ++s)
        for (std::size_t i = 0; i < wi.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.10e,%.10e,%.8e\n", ws[s], wi[i], at(s, i));
            os << buf;
        }
}

namespace {

std::vector<double> axis(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo))
        throw Error(ErrorCode::InvalidArgument, "grid axis needs at least two points over a non-empty window");
    std::vector<double> a(static_cast<std::size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int k = 0; k < n; ++k)
        a[static_cast<std::size_t>(k)] = lo + k * h;
    a.back() = hi;
    return a;
}

// Adds to w the weights that integrate the piecewise-linear interpolant of
// samples at x0 + k·h (k < n) over [a, b]. Reduces to the trapezoid rule when
// a and b are nodes.
void linear_weights(double x0, double h, int n, double a, double b, std::vector<double>& w) {
    if (!(b > a))
        return;
    const int k0 = std::max(0, static_cast<int>(std::floor((a - x0) / h)));
    const int k1 = std::min(n - 2, static_cast<int>(std::floor((b - x0) / h)));
    for (int k = k0; k <= k1; ++k) {
        const double xl = x0 + k * h;
        const double xr = xl + h;
        const double u = std::max(a, xl);
        const double v = std::min(b, xr);
        if (!(v > u))
            continue;
        w[static_cast<std::size_t>(k)] += ((xr - u) * (xr - u) - (xr - v) * (xr - v)) / (2.0 * h);
        w[static_cast<std::size_t>(k) + 1] += ((v - xl) * (v - xl) - (u - xl) * (u - xl)) / (2.0 * h);
    }
}

} // namespace

OmegaWindow window_around(const FilterSpec& f) {
    return {f.center_omega - 1.5 * f.bandwidth_omega, f.center_omega + 1.5 * f.bandwidth_omega};
}

JsdGrid jsd(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
            const OmegaWindow& signal, const OmegaWindow& idler, int n_signal, int n_idler) {
    pulse.validate();
    JsdGrid g;
    g.ws = axis(signal.lo, signal.hi, n_signal);
    g.wi = axis(idler.lo, idler.hi, n_idler);
    g.pump_lambda_um = pulse.lambda_um;
    g.gamma = gamma;
    g.length_m = length_m;
    g.curve_hash = curve.geometry_hash();
    const double wp = pulse.omega();
    for (double w : {signal.lo, signal.hi, idler.lo, idler.hi, wp})
        if (!curve.contains(w))
            throw Error(ErrorCode::OutOfRange, "spectral window leaves the dispersion curve span");
    g.values.assign(g.ws.size() * g.wi.size(), 0.0);
    for (std::size_t s = 0; s < g.ws.size(); ++s)
        for (std::size_t i = 0; i < g.wi.size(); ++i) {
            const double a = jsd_factor_A(curve, gamma, length_m, pulse, g.ws[s], g.wi[i]);
            if (a == 0.0)
                continue;
            const double gg = jsd_factor_G(pulse, g.ws[s], g.wi[i], wp);
            if (gg == 0.0)
                continue;
            g.values[s * g.wi.size() + i] = a * gg * jsd_factor_F(curve, length_m, wp, g.ws[s], g.wi[i]);
        }
    return g;
}

PgpResult pgp(const JsdGrid& grid, const FilterSpec& signal, const FilterSpec& idler) {
    signal.validate();
    idler.validate();
    const double tol_s = 1e-9 * (grid.ws.back() - grid.ws.front());
    const double tol_i = 1e-9 * (grid.wi.back() - grid.wi.front());
    if (signal.lo() < grid.ws.front() - tol_s || signal.hi() > grid.ws.back() + tol_s || idler.lo() < grid.wi.front() - tol_i ||
        idler.hi() > grid.wi.back() + tol_i)
        throw Error(ErrorCode::FilterOutsideGrid, "filter passband extends beyond the spectral density grid");
    const int ns = static_cast<int>(grid.ws.size());
    const int ni = static_cast<int>(grid.wi.size());
    const double hs = (grid.ws.back() - grid.ws.front()) / (ns - 1);
    const double hi = (grid.wi.back() - grid.wi.front()) / (ni - 1);
    std::vector<double> w_s(grid.ws.size(), 0.0), w_i(grid.wi.size(), 0.0);
    linear_weights(grid.ws.front(), hs, ns, signal.lo(), signal.hi(), w_s);
    linear_weights(grid.wi.front(), hi, ni, idler.lo(), idler.hi(), w_i);

    PgpResult r;
    r.resolution = std::max(ns, ni);
    double peak = -1.0;
    for (std::size_t s = 0; s < grid.ws.size(); ++s) {
        if (w_s[s] == 0.0)
            continue;
        double row = 0.0;
        for (std::size_t i = 0; i < grid.wi.size(); ++i) {
            if (w_i[i] == 0.0)
                continue;
            const double v = grid.at(s, i);
            row += w_i[i] * v;
            if (v > peak) {
                peak = v;
                r.peak_signal_um = um_from_omega(grid.ws[s]);
                r.peak_idler_um = um_from_omega(grid.wi[i]);
            }
        }
        r.pgp += w_s[s] * row;
    }
    return r;
}

namespace {

struct Level {
    double integral = 0.0;
    double peak = -1.0;
    double peak_ws = 0.0;
    double peak_wi = 0.0;
};

Level sheared_trapezoid(const dispersion::DispersionCurve& curve, double gamma, double length_m,
                        const PumpPulse& pulse, double s_lo, double s_hi, const FilterSpec& idler, double x_half,
                        int n) {
    const double wp = pulse.omega();
    const double hs = (s_hi - s_lo) / (n - 1);
    const double hx = 2.0 * x_half / (n - 1);
    const double vgp = curve.group_velocity(wp);
    const double bp2 = 2.0 * curve.beta(wp);
    const double ngp = curve.group_index(wp);
    const double scale = ngp / (2.0 * kPi) * gamma * length_m * pulse.energy_j() / wp;

    std::vector<double> w_s(static_cast<std::size_t>(n), 0.0);
    linear_weights(s_lo, hs, n, s_lo, s_hi, w_s);
    std::vector<double> w_x(static_cast<std::size_t>(n));
    Level out;
    for (int k = 0; k < n; ++k) {
        const double ws = s_lo + k * hs;
        const double bs = curve.beta(ws);
        const double ngs = curve.group_index(ws);
        std::fill(w_x.begin(), w_x.end(), 0.0);
        const double xa = std::max(-x_half, idler.lo() - 2.0 * wp + ws);
        const double xb = std::min(x_half, idler.hi() - 2.0 * wp + ws);
        linear_weights(-x_half, hx, n, xa, xb, w_x);
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wx = w_x[static_cast<std::size_t>(j)];
            if (wx == 0.0)
                continue;
            const double x = -x_half + j * hx;
            const double wi = 2.0 * wp - ws + x;
            const double amp = scale * std::sqrt(ngs * curve.group_index(wi) * ws * wi);
            const double arg = (bp2 - bs - curve.beta(wi) + x / vgp) * 0.5 * length_m;
            const double s = sinc(arg);
            const double v = amp * amp * jsd_factor_G(pulse.duration_s, x) * s * s;
            row += wx * v;
            if (v > out.peak) {
                out.peak = v;
                out.peak_ws = ws;
                out.peak_wi = wi;
            }
        }
        out.integral += w_s[static_cast<std::size_t>(k)] * row;
    }
    return out;
}

} // namespace

PgpResult compute_pgp(const dispersion::DispersionCurve& curve, double gamma, double length_m, const PumpPulse& pulse,
                      const FilterSpec& signal, const FilterSpec& idler, const PgpOptions& opts) {
    pulse.validate();
    signal.validate();
    idler.validate();
    const double wp = pulse.omega();
    for (double w : {signal.lo(), signal.hi(), idler.lo(), idler.hi(), wp})
        if (!curve.contains(w)) {
            std::ostringstream os;
            os << "filter or pump at " << um_from_omega(w) << " um lies outside the dispersion curve span";
            throw Error(ErrorCode::OutOfRange, os.str());
        }
    const double x_half = opts.ridge_halfwidth_t0 / pulse.duration_s;
    // Only signal frequencies whose energy-conserving partners can reach the
    // idler passband contribute.
    const double s_lo = std::max(signal.lo(), 2.0 * wp - idler.hi() - x_half);
    const double s_hi = std::min(signal.hi(), 2.0 * wp - idler.lo() + x_half);
    PgpResult r;
    if (!(s_hi > s_lo) || gamma == 0.0 || pulse.peak_power_w == 0.0) {
        r.resolution = opts.initial_resolution;
        return r;
    }
    int n = std::max(3, opts.initial_resolution);
    Level coarse = sheared_trapezoid(curve, gamma, length_m, pulse, s_lo, s_hi, idler, x_half, n);
    for (int level = 0; level < opts.max_levels; ++level) {
        const int nf = 2 * n - 1;
        const Level fine = sheared_trapezoid(curve, gamma, length_m, pulse, s_lo, s_hi, idler, x_half, nf);
        const double diff = std::abs(fine.integral - coarse.integral);
        if (diff <= opts.rel_tolerance * std::abs(fine.integral)) {
            r.pgp = fine.integral;
            r.error_estimate = diff / 3.0;
            r.resolution = nf;
            if (fine.peak > 0.0) {
                r.peak_signal_um = um_from_omega(fine.peak_ws);
                r.peak_idler_um = um_from_omega(fine.peak_wi);
            }
            return r;
        }
        coarse = fine;
        n = nf;
    }
    throw Error(ErrorCode::QuadratureNotConverged,
                "pair probability did not converge to the requested tolerance after grid refinement");
}

double pgr(double pgp, double rep_rate_hz) { return pgp * rep_rate_hz; }

double detected_rate(double pgr, const DetectionChain& chain) { return pgr * chain.factor(); }

double peak_power_from_mean(double mean_w, double rep_rate_hz, double tau_s) {
    return 2.0 / (rep_rate_hz * tau_s) * std::sqrt(std::log(2.0) / kPi) * mean_w;
}

double material_attenuation(const PowerSplit& f, double alpha_si_db_cm, double alpha_silica_db_cm, double length_m) {
    const double l_cm = length_m * 100.0;
    return f.core * std::pow(10.0, -alpha_si_db_cm * l_cm / 10.0) +
           (f.silica + f.box) * std::pow(10.0, -alpha_silica_db_cm * l_cm / 10.0);
}

std::pair<double, double> raman_window(double lambda_p_um) {
    if (!(lambda_p_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "pump wavelength must be positive");
    const double nu = kSpeedOfLight / (lambda_p_um * 1e-6);
    return {kSpeedOfLight / (nu - 15.6e12) * 1e6, kSpeedOfLight / (nu - 16.2e12) * 1e6};
}

FilterFrequency filter_to_frequency(double center_nm, double bandwidth_nm) {
    const double l = center_nm * 1e-9;
    return {kSpeedOfLight / l * 1e-12, kSpeedOfLight * bandwidth_nm * 1e-9 / (l * l) * 1e-12};
}

} // namespace sfwm
