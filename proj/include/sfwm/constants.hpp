#pragma once

#include <numbers>

namespace sfwm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Angular frequency (rad/s) of vacuum wavelength given in micrometres.
constexpr double omega_from_um(double lambda_um) { return 2.0 * kPi * kSpeedOfLight / (lambda_um * 1e-6); }

/// Vacuum wavelength in micrometres for angular frequency in rad/s.
constexpr double um_from_omega(double omega) { return 2.0 * kPi * kSpeedOfLight / omega * 1e6; }

constexpr double thz_to_omega(double thz) { return 2.0 * kPi * thz * 1e12; }
constexpr double omega_to_thz(double omega) { return omega / (2.0 * kPi * 1e12); }

} // namespace sfwm
