#include "sfwm/design.hpp"

#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"
#include "sfwm/physics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace sfwm::design {

std::vector<PhaseMatchPoint> phase_match_solve(const dispersion::DispersionCurve& curve, double lambda_p_um,
                                               const PhaseMatchOptions& opts) {
    const double wp = omega_from_um(lambda_p_um);
    if (!curve.contains(wp))
        throw Error(ErrorCode::OutOfRange, "pump wavelength outside the dispersion curve span");
    const double step = thz_to_omega(opts.scan_step_thz);
    const double w_top = wp - thz_to_omega(opts.exclusion_thz);
    const double w_bottom = std::max(curve.omega_min(), 2.0 * wp - curve.omega_max());
    auto mismatch = [&](double ws) { return phase_mismatch(curve, wp, ws, 2.0 * wp - ws); };

    std::vector<PhaseMatchPoint> out;
    auto record = [&](double ws, double residual) {
        PhaseMatchPoint p;
        p.lambda_p_um = lambda_p_um;
        p.lambda_s_um = um_from_omega(ws);
        p.lambda_i_um = um_from_omega(2.0 * wp - ws);
        p.residual = residual;
        out.push_back(p);
    };

    if (w_top > w_bottom) {
        double hi = w_top;
        double fhi = mismatch(hi);
        while (hi > w_bottom) {
            const double lo = std::max(w_bottom, hi - step);
            const double flo = mismatch(lo);
            // Sign flips where both ends sit inside the tolerance are rounding
            // noise on a locally flat mismatch, not roots.
            const bool flips = (flo < 0.0) != (fhi < 0.0);
            if (flips && std::max(std::abs(flo), std::abs(fhi)) > opts.tolerance) {
                double a = lo, fa = flo, b = hi;
                double m = 0.5 * (a + b), fm = mismatch(m);
                for (int it = 0; it < 200 && std::abs(fm) >= opts.tolerance; ++it) {
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                    m = 0.5 * (a + b);
                    fm = mismatch(m);
                }
                if (std::abs(fm) < opts.tolerance)
                    record(m, fm);
            }
            hi = lo;
            fhi = flo;
        }
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no non-degenerate phase matching at pump " << lambda_p_um << " um";
        throw Error(ErrorCode::NoRoot, os.str());
    }
    std::sort(out.begin(), out.end(),
              [](const PhaseMatchPoint& a, const PhaseMatchPoint& b) { return a.lambda_s_um < b.lambda_s_um; });
    return out;
}

std::vector<double> Range::values() const {
    if (!(step > 0.0) || !(hi >= lo))
        throw Error(ErrorCode::InvalidArgument, "invalid search range");
    std::vector<double> v;
    const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k)
        v.push_back(std::round((lo + k * step) * 1e6) / 1e6);
    return v;
}

std::vector<CurveEntry> phase_match_curve(const dispersion::DispersionCurve& curve, double lo_um, double hi_um,
                                          double step_um, std::optional<Band> idler_band,
                                          const PhaseMatchOptions& opts) {
    std::vector<CurveEntry> out;
    for (double lp : Range{lo_um, hi_um, step_um}.values()) {
        CurveEntry e{lp, {}};
        try {
            for (const auto& p : phase_match_solve(curve, lp, opts))
                if (!idler_band || idler_band->contains(p.lambda_i_um))
                    e.points.push_back(p);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NoRoot)
                throw;
        }
        out.push_back(std::move(e));
    }
    return out;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveEntry>& entries) {
    os << "lambda_p_um,lambda_s_um,lambda_i_um,residual_rad_per_m\n";
    char buf[128];
    for (const auto& e : entries) {
        if (e.points.empty()) {
            std::snprintf(buf, sizeof buf, "%.6f,,,\n", e.lambda_p_um);
            os << buf;
        }
        for (const auto& p : e.points) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.3e\n", p.lambda_p_um, p.lambda_s_um, p.lambda_i_um,
                          p.residual);
            os << buf;
        }
    }
}

PhaseMatchPoint nearest_root(const dispersion::DispersionCurve& curve, double lambda_p_um, double target_um,
                             const PhaseMatchOptions& opts) {
    const auto roots = phase_match_solve(curve, lambda_p_um, opts);
    return *std::min_element(roots.begin(), roots.end(), [&](const PhaseMatchPoint& a, const PhaseMatchPoint& b) {
        return std::abs(a.lambda_s_um - target_um) < std::abs(b.lambda_s_um - target_um);
    });
}

double pump_retune(const dispersion::DispersionCurve& curve, double target_signal_um, double guess_pump_um,
                   const RetuneOptions& opts, const PhaseMatchOptions& pm) {
    auto offset = [&](double lp, double& g) {
        try {
            g = nearest_root(curve, lp, target_signal_um, pm).lambda_s_um - target_signal_um;
            return true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoRoot && e.code() != ErrorCode::OutOfRange)
                throw;
            return false;
        }
    };
    double g0 = 0.0;
    const bool ok0 = offset(guess_pump_um, g0);
    if (ok0 && std::abs(g0) <= opts.tolerance_um)
        return guess_pump_um;

    // Walk outwards from the guess, alternating sides, and bisect the first
    // bracket found.
    const int steps = static_cast<int>(std::lround(opts.search_halfwidth_um / opts.scan_step_um));
    for (int k = 1; k <= steps; ++k) {
        for (int side : {+1, -1}) {
            const double inner = guess_pump_um + side * (k - 1) * opts.scan_step_um;
            const double outer = guess_pump_um + side * k * opts.scan_step_um;
            double gi = 0.0, go = 0.0;
            if (!offset(inner, gi) || !offset(outer, go))
                continue;
            if (std::abs(go) <= opts.tolerance_um)
                return outer;
            if ((gi < 0.0) == (go < 0.0))
                continue;
            double a = inner, ga = gi, b = outer;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b);
                double gm = 0.0;
                if (!offset(m, gm))
                    break;
                if (std::abs(gm) <= opts.tolerance_um)
                    return m;
                if ((gm < 0.0) == (ga < 0.0)) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
        }
    }
    std::ostringstream os;
    os << "signal " << target_signal_um << " um not reachable within +/-" << opts.search_halfwidth_um * 1e3
       << " nm of pump " << guess_pump_um << " um";
    throw Error(ErrorCode::NoRoot, os.str());
}

std::vector<ToleranceRow> tolerance_sweep(const modes::WaveguideGeometry& nominal, double target_signal_um,
                                          double pump_um, const CurveBuilder& build, double delta_um,
                                          const RetuneOptions& retune, const PhaseMatchOptions& pm) {
    struct Case {
        const char* name;
        double da;
        double db;
    };
    const Case cases[] = {{"a+", delta_um, 0.0}, {"a-", -delta_um, 0.0}, {"b+", 0.0, delta_um}, {"b-", 0.0, -delta_um}};
    std::vector<ToleranceRow> rows;
    for (const Case& c : cases) {
        ToleranceRow row;
        row.geometry = nominal;
        row.geometry.width_um = nominal.width_um + c.da;
        row.geometry.height_um = nominal.height_um + c.db;
        char label[32];
        std::snprintf(label, sizeof label, "%s%.3fum", c.name, delta_um);
        row.label = label;
        const dispersion::DispersionCurve curve = build(row.geometry);
        row.drift = nearest_root(curve, pump_um, target_signal_um, pm);
        const double lp = pump_retune(curve, target_signal_um, pump_um, retune, pm);
        row.retuned = nearest_root(curve, lp, target_signal_um, pm);
        spdlog::info("tolerance {}: drift signal {:.4f} um, retuned pump {:.4f} um", row.label,
                     row.drift.lambda_s_um, lp);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::optional<Candidate> best_for_curve(const dispersion::DispersionCurve& curve,
                                        const modes::WaveguideGeometry& geom, const DesignTarget& target,
                                        const PhaseMatchOptions& pm) {
    std::optional<Candidate> best;
    for (double lp : target.pump.values()) {
        if (!curve.contains(omega_from_um(lp)))
            continue;
        std::vector<PhaseMatchPoint> roots;
        try {
            roots = phase_match_solve(curve, lp, pm);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoRoot)
                throw;
            continue;
        }
        for (const auto& p : roots) {
            if (!target.idler_band.contains(p.lambda_i_um))
                continue;
            const double score = std::abs(p.lambda_s_um - target.signal_um);
            if (!best || score < best->score_um)
                best = Candidate{geom, p, score};
        }
    }
    return best;
}

} // namespace

std::vector<Candidate> grid_search(const DesignTarget& target, const materials::Library& lib,
                                   const GridSearchOptions& opts) {
    const auto coarse = dispersion::wavelength_grid(1.40, 4.20, opts.coarse_step_um);
    std::vector<Candidate> ranked;
    for (double a : target.width.values())
        for (double b : target.height.values()) {
            modes::WaveguideGeometry g = opts.base;
            g.width_um = a;
            g.height_um = b;
            std::optional<Candidate> best;
            try {
                const auto curve = dispersion::build_curve(g, lib, coarse, opts.build);
                best = best_for_curve(curve, g, target, opts.pm);
                if (best && opts.refine) {
                    const auto fine = dispersion::wavelength_grid(
                        1.40, 4.20, opts.coarse_step_um,
                        {best->point.lambda_p_um, best->point.lambda_s_um, best->point.lambda_i_um},
                        opts.fine_step_um, opts.fine_halfwidth_um);
                    best = best_for_curve(dispersion::build_curve(g, lib, fine, opts.build), g, target, opts.pm);
                }
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Config || e.code() == ErrorCode::InvalidArgument)
                    throw;
                spdlog::warn("grid search: skipping {:.3f} x {:.3f} um ({})", a, b, e.what());
                continue;
            }
            if (best)
                ranked.push_back(*best);
        }
    if (ranked.empty())
        throw Error(ErrorCode::EmptyResult, "no geometry phase-matches the target with the idler inside the band");
    std::stable_sort(ranked.begin(), ranked.end(), [](const Candidate& x, const Candidate& y) {
        if (x.score_um != y.score_um)
            return x.score_um < y.score_um;
        if (x.geometry.width_um != y.geometry.width_um)
            return x.geometry.width_um < y.geometry.width_um;
        return x.geometry.height_um < y.geometry.height_um;
    });
    return ranked;
}

} // namespace sfwm::design
