#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"
#include "sfwm/modes.hpp"

#include <algorithm>
#include <cmath>

namespace sfwm::modes {

namespace {

// Transverse phase balance of the fundamental TE mode,
//   κt − atan(γ_top/κ) − atan(γ_bottom/κ) = 0,
// which for equal claddings is tan(κt/2) = γ/κ.
double phase_balance(double kappa, double k0, double n_core, double n_top, double n_bottom, double t) {
    const double gt = std::sqrt(std::max(0.0, k0 * k0 * (n_core * n_core - n_top * n_top) - kappa * kappa));
    const double gb = std::sqrt(std::max(0.0, k0 * k0 * (n_core * n_core - n_bottom * n_bottom) - kappa * kappa));
    return kappa * t - std::atan2(gt, kappa) - std::atan2(gb, kappa);
}

} // namespace

double slab_residual(double n_eff, double n_core, double n_top, double n_bottom, double thickness_um,
                     double lambda_um) {
    const double k0 = 2.0 * kPi / lambda_um;
    const double kappa = k0 * std::sqrt(std::max(0.0, n_core * n_core - n_eff * n_eff));
    return phase_balance(kappa, k0, n_core, n_top, n_bottom, thickness_um) / kPi;
}

double solve_slab_mode(double n_core, double n_top, double n_bottom, double thickness_um, double lambda_um) {
    if (!(n_core > n_top) || !(n_core > n_bottom))
        throw Error(ErrorCode::InvalidArgument, "slab core index must exceed both claddings");
    if (!(thickness_um > 0.0) || !(lambda_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "slab thickness and wavelength must be positive");
    const double k0 = 2.0 * kPi / lambda_um;
    const double n_hi = std::max(n_top, n_bottom);
    double hi = k0 * std::sqrt(n_core * n_core - n_hi * n_hi);
    double lo = 0.0;
    if (phase_balance(hi, k0, n_core, n_top, n_bottom, thickness_um) <= 0.0)
        throw Error(ErrorCode::NoGuidedMode, "asymmetric slab below cutoff of the fundamental TE mode");
    // The phase balance increases monotonically in κ; bisect to adjacent doubles.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (phase_balance(mid, k0, n_core, n_top, n_bottom, thickness_um) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double kappa = 0.5 * (lo + hi);
    return std::sqrt(n_core * n_core - (kappa / k0) * (kappa / k0));
}

double solve_slab_mode(double n_core, double n_clad, double thickness_um, double lambda_um) {
    return solve_slab_mode(n_core, n_clad, n_clad, thickness_um, lambda_um);
}

} // namespace sfwm::modes
