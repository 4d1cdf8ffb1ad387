#pragma once

#include "sfwm/constants.hpp"
#include "sfwm/dispersion.hpp"

#include <cmath>
#include <string>

namespace synthetic {

// β(ω) as a quartic Taylor series about ω_p. Odd orders cancel in
// 2β(ω_p) − β(ω_p + Ω) − β(ω_p − Ω) = −β2·Ω² − β4·Ω⁴/12, so with β2 > 0 and
// β4 < 0 the non-degenerate root sits at Ω² = −12·β2/β4.
struct Quartic {
    double lambda_p_um = 2.2;
    double n0 = 3.0;
    double ng = 3.7;
    double beta2 = 2e-25; // s²/m
    double beta3 = 1e-40; // s³/m
    double beta4 = 0.0;   // s⁴/m

    double wp() const { return sfwm::omega_from_um(lambda_p_um); }
    double beta(double w) const {
        const double d = w - wp();
        return n0 * wp() / sfwm::kSpeedOfLight + ng / sfwm::kSpeedOfLight * d + beta2 * d * d / 2.0 +
               beta3 * d * d * d / 6.0 + beta4 * d * d * d * d / 24.0;
    }
    // Sets β4 so that the signal phase-matches at lambda_s.
    Quartic& match_signal(double lambda_s_um) {
        const double big = wp() - sfwm::omega_from_um(lambda_s_um);
        beta4 = -12.0 * beta2 / (big * big);
        return *this;
    }
    double root_signal_um() const {
        return sfwm::um_from_omega(wp() - std::sqrt(-12.0 * beta2 / beta4));
    }
    sfwm::dispersion::DispersionCurve curve(double lo = 1.3, double hi = 4.6, double step = 0.02) const {
        std::vector<sfwm::dispersion::Sample> s;
        for (int k = 0; lo + k * step <= hi + 1e-9; ++k) {
            const double l = lo + k * step;
            const double w = sfwm::omega_from_um(l);
            s.push_back({l, beta(w) * sfwm::kSpeedOfLight / w});
        }
        return sfwm::dispersion::DispersionCurve(std::move(s), "quartic");
    }
};

} // namespace synthetic
