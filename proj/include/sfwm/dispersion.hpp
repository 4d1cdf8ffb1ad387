#pragma once

#include "sfwm/modes.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sfwm::dispersion {

struct Sample {
    double lambda_um;
    double n_eff;
};

/// β(ω) = n_eff(ω)·ω/c interpolated by a not-a-knot cubic spline in ω.
/// Immutable once built.
class DispersionCurve {
public:
    /// Samples may come in any order. Throws InvalidArgument with fewer than
    /// seven samples and NonMonotoneBeta when β does not increase with ω.
    DispersionCurve(std::vector<Sample> samples, std::string geometry_hash = {});

    double beta(double omega) const;            // rad/m
    double beta_derivative(double omega) const; // s/m
    double n_eff(double omega) const;
    double group_index(double omega) const;
    double group_velocity(double omega) const; // m/s

    double omega_min() const { return omega_.front(); }
    double omega_max() const { return omega_.back(); }
    double lambda_min_um() const;
    double lambda_max_um() const;
    bool contains(double omega) const;

    /// Samples sorted by increasing wavelength.
    const std::vector<Sample>& samples() const { return samples_; }
    const std::string& geometry_hash() const { return hash_; }

    /// Largest |n_eff| error when each interior sample is dropped in turn and
    /// predicted from the spline through the rest.
    double leave_one_out_error() const;

    /// Rows (lambda_um, n_eff, n_g) at every sample.
    void write_csv(std::ostream& os) const;

private:
    std::size_t segment(double omega) const;
    void check(double omega) const;

    std::vector<Sample> samples_;
    std::string hash_;
    std::vector<double> omega_; // rad/s, ascending
    std::vector<double> beta_;  // rad/m
    std::vector<double> m_;     // second derivatives of β at the knots
};

/// Not-a-knot cubic spline through (x, y); returns the second derivatives at
/// the knots. Exposed for tests.
std::vector<double> spline_second_derivatives(const std::vector<double>& x, const std::vector<double>& y);

/// 64-bit FNV-1a of `text`, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Hash identifying a geometry together with the solver settings that affect
/// its effective indices.
std::string geometry_hash(const modes::WaveguideGeometry& geom, const modes::FdOptions& opts);
std::string geometry_hash(const modes::FiberGeometry& geom);

/// Persistent store of solved effective indices keyed by geometry hash and
/// wavelength. The file is plain text with a version line and a column header.
class ModeCache {
public:
    ModeCache() = default;
    /// Loads `path` if it exists. Throws Io on a malformed or foreign file.
    explicit ModeCache(std::string path);

    bool lookup(const std::string& hash, double lambda_um, double& n_eff) const;
    void store(const std::string& hash, double lambda_um, double n_eff);
    /// Writes the whole cache (sorted) when a path is set and entries changed.
    void save() const;
    std::size_t size() const { return entries_.size(); }
    const std::string& path() const { return path_; }

private:
    static std::int64_t key(double lambda_um);

    std::string path_;
    std::map<std::pair<std::string, std::int64_t>, std::pair<double, double>> entries_;
    mutable bool dirty_ = false;
};

/// Uniform wavelength samples from `start` to `stop` (inclusive) in steps of
/// `step`, with optional extra points at `fine_step` within ±`fine_halfwidth`
/// of each centre in `refine_near`.
std::vector<double> wavelength_grid(double start_um, double stop_um, double step_um,
                                    const std::vector<double>& refine_near = {}, double fine_step_um = 0.01,
                                    double fine_halfwidth_um = 0.1);

/// Default design sampling: 1.40 to 4.20 µm every 50 nm.
std::vector<double> default_wavelength_grid();

struct BuildOptions {
    modes::FdOptions fd;
    ModeCache* cache = nullptr;
    int threads = 1;
};

DispersionCurve build_curve(const modes::WaveguideGeometry& geom, const materials::Library& lib,
                            const std::vector<double>& lambdas_um, const BuildOptions& opts = {});
DispersionCurve build_curve(const modes::FiberGeometry& geom, const materials::Library& lib,
                            const std::vector<double>& lambdas_um);

} // namespace sfwm::dispersion
