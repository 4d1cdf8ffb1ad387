#include "sfwm/dispersion.hpp"

#include "sfwm/constants.hpp"
#include "sfwm/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace sfwm::dispersion {

namespace {

// Knot abscissae are kept in rad/fs so the spline system is well scaled.
constexpr double kOmegaScale = 1e-15;

} // namespace

std::vector<double> spline_second_derivatives(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 4 || y.size() != n)
        throw Error(ErrorCode::InvalidArgument, "not-a-knot spline needs at least four knots");
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0))
            throw Error(ErrorCode::InvalidArgument, "spline knots must be strictly increasing");
    }
    // Unknowns M_1 … M_{n-2}; M_0 and M_{n-1} are eliminated with the
    // not-a-knot conditions (continuous third derivative at x_1 and x_{n-2}).
    const std::size_t m = n - 2;
    std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = r + 1;
        lo[r] = h[i - 1];
        di[r] = 2.0 * (h[i - 1] + h[i]);
        up[r] = h[i];
        rhs[r] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    {
        const double h0 = h[0], h1 = h[1];
        di[0] += h0 * (h0 + h1) / h1;
        up[0] -= h0 * h0 / h1;
        lo[0] = 0.0;
    }
    {
        const double ha = h[n - 3], hb = h[n - 2];
        di[m - 1] += hb * (ha + hb) / ha;
        lo[m - 1] -= hb * hb / ha;
        up[m - 1] = 0.0;
    }
    // Thomas algorithm.
    for (std::size_t r = 1; r < m; ++r) {
        const double w = lo[r] / di[r - 1];
        di[r] -= w * up[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    std::vector<double> M(n, 0.0);
    M[m] = rhs[m - 1] / di[m - 1];
    for (std::size_t r = m - 1; r-- > 0;)
        M[r + 1] = (rhs[r] - up[r] * M[r + 2]) / di[r];
    M[0] = ((h[0] + h[1]) * M[1] - h[0] * M[2]) / h[1];
    M[n - 1] = ((h[n - 3] + h[n - 2]) * M[n - 2] - h[n - 2] * M[n - 3]) / h[n - 3];
    return M;
}

DispersionCurve::DispersionCurve(std::vector<Sample> samples, std::string geometry_hash)
    : samples_(std::move(samples)), hash_(std::move(geometry_hash)) {
    if (samples_.size() < 7)
        throw Error(ErrorCode::InvalidArgument, "a dispersion curve needs at least 7 samples");
    std::sort(samples_.begin(), samples_.end(),
              [](const Sample& a, const Sample& b) { return a.lambda_um < b.lambda_um; });
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        const Sample& s = samples_[samples_.size() - 1 - k];
        if (!(s.lambda_um > 0.0) || !(s.n_eff > 0.0))
            throw Error(ErrorCode::InvalidArgument, "samples need positive wavelength and effective index");
        const double w = omega_from_um(s.lambda_um);
        omega_.push_back(w * kOmegaScale);
        beta_.push_back(s.n_eff * w / kSpeedOfLight);
    }
    for (std::size_t k = 1; k < omega_.size(); ++k) {
        if (!(omega_[k] > omega_[k - 1]))
            throw Error(ErrorCode::InvalidArgument, "duplicate wavelength in dispersion samples");
        if (!(beta_[k] > beta_[k - 1]))
            throw Error(ErrorCode::NonMonotoneBeta, "propagation constant does not increase with frequency");
    }
    m_ = spline_second_derivatives(omega_, beta_);
    // Restore the knots exactly so that every sample wavelength maps back
    // inside the span.
    for (std::size_t k = 0; k < omega_.size(); ++k)
        omega_[k] = omega_from_um(samples_[samples_.size() - 1 - k].lambda_um);
    for (double w : omega_)
        if (!(beta_derivative(w) > 0.0))
            throw Error(ErrorCode::NonMonotoneBeta, "spline of the propagation constant is not increasing");
}

double DispersionCurve::lambda_min_um() const { return samples_.front().lambda_um; }
double DispersionCurve::lambda_max_um() const { return samples_.back().lambda_um; }

bool DispersionCurve::contains(double omega) const { return omega >= omega_.front() && omega <= omega_.back(); }

void DispersionCurve::check(double omega) const {
    if (!contains(omega)) {
        std::ostringstream os;
        os << "wavelength " << um_from_omega(omega) << " um outside the sampled span [" << lambda_min_um() << ", "
           << lambda_max_um() << "] um";
        throw Error(ErrorCode::OutOfRange, os.str());
    }
}

std::size_t DispersionCurve::segment(double omega) const {
    auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
    std::size_t i = it == omega_.begin() ? 0 : static_cast<std::size_t>(it - omega_.begin()) - 1;
    return std::min(i, omega_.size() - 2);
}

double DispersionCurve::beta(double omega) const {
    check(omega);
    const std::size_t i = segment(omega);
    const double h = (omega_[i + 1] - omega_[i]) * kOmegaScale;
    const double a = (omega_[i + 1] - omega) * kOmegaScale / h;
    const double b = 1.0 - a;
    return a * beta_[i] + b * beta_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double DispersionCurve::beta_derivative(double omega) const {
    check(omega);
    const std::size_t i = segment(omega);
    const double h = (omega_[i + 1] - omega_[i]) * kOmegaScale;
    const double a = (omega_[i + 1] - omega) * kOmegaScale / h;
    const double b = 1.0 - a;
    const double d = (beta_[i + 1] - beta_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
                     (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    return d * kOmegaScale;
}

double DispersionCurve::n_eff(double omega) const { return beta(omega) * kSpeedOfLight / omega; }

double DispersionCurve::group_index(double omega) const { return kSpeedOfLight * beta_derivative(omega); }

double DispersionCurve::group_velocity(double omega) const { return kSpeedOfLight / group_index(omega); }

double DispersionCurve::leave_one_out_error() const {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < samples_.size(); ++k) {
        std::vector<Sample> rest;
        rest.reserve(samples_.size() - 1);
        for (std::size_t j = 0; j < samples_.size(); ++j)
            if (j != k)
                rest.push_back(samples_[j]);
        const DispersionCurve partial(std::move(rest));
        const double w = omega_from_um(samples_[k].lambda_um);
        worst = std::max(worst, std::abs(partial.n_eff(w) - samples_[k].n_eff));
    }
    return worst;
}

void DispersionCurve::write_csv(std::ostream& os) const {
    os << "lambda_um,n_eff,n_g\n";
    char buf[128];
    for (const Sample& s : samples_) {
        const double ng = group_index(omega_from_um(s.lambda_um));
        std::snprintf(buf, sizeof buf, "%.6f,%.12f,%.12f\n", s.lambda_um, s.n_eff, ng);
        os << buf;
    }
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string geometry_hash(const modes::WaveguideGeometry& geom, const modes::FdOptions& opts) {
    std::ostringstream os;
    os.precision(10);
    os << geom.canonical() << ";h=" << opts.grid_step_um
       << ";sym=" << (opts.symmetry == modes::Symmetry::Auto ? "auto" : "none");
    return fnv1a_hex(os.str());
}

std::string geometry_hash(const modes::FiberGeometry& geom) { return fnv1a_hex(geom.canonical()); }

namespace {

constexpr const char* kCacheMagic = "# sfwm mode cache";
constexpr const char* kCacheVersion = "# version: 1";
constexpr const char* kCacheHeader = "lambda_um,n_eff,geometry_hash";

} // namespace

ModeCache::ModeCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in)
        return;
    std::string line;
    auto expect = [&](const char* want) {
        if (!std::getline(in, line) || line != want)
            throw Error(ErrorCode::Io, "'" + path_ + "' is not a version-1 mode cache (expected '" + want + "')");
    };
    expect(kCacheMagic);
    expect(kCacheVersion);
    expect(kCacheHeader);
    int lineno = 3;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string lam, neff, hash;
        if (!std::getline(ls, lam, ',') || !std::getline(ls, neff, ',') || !std::getline(ls, hash))
            throw Error(ErrorCode::Io, path_ + ":" + std::to_string(lineno) + ": malformed cache row");
        try {
            const double l = std::stod(lam);
            entries_[{hash, key(l)}] = {l, std::stod(neff)};
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Io, path_ + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
}

std::int64_t ModeCache::key(double lambda_um) { return std::llround(lambda_um * 1e9); }

bool ModeCache::lookup(const std::string& hash, double lambda_um, double& n_eff) const {
    auto it = entries_.find({hash, key(lambda_um)});
    if (it == entries_.end())
        return false;
    n_eff = it->second.second;
    return true;
}

void ModeCache::store(const std::string& hash, double lambda_um, double n_eff) {
    entries_[{hash, key(lambda_um)}] = {lambda_um, n_eff};
    dirty_ = true;
}

void ModeCache::save() const {
    if (path_.empty() || !dirty_)
        return;
    const std::string tmp = path_ + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw Error(ErrorCode::Io, "cannot write mode cache '" + tmp + "'");
        out << kCacheMagic << '\n' << kCacheVersion << '\n' << kCacheHeader << '\n';
        char buf[96];
        for (const auto& [k, v] : entries_) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,", v.first, v.second);
            out << buf << k.first << '\n';
        }
    }
    std::filesystem::rename(tmp, path_);
    dirty_ = false;
}

std::vector<double> wavelength_grid(double start_um, double stop_um, double step_um,
                                    const std::vector<double>& refine_near, double fine_step_um,
                                    double fine_halfwidth_um) {
    if (!(step_um > 0.0) || !(stop_um >= start_um) || !(start_um > 0.0))
        throw Error(ErrorCode::InvalidArgument, "invalid wavelength sampling range");
    auto snap = [](double v) { return std::round(v * 1e6) / 1e6; };
    std::vector<double> out;
    const long n = static_cast<long>(std::floor((stop_um - start_um) / step_um + 1e-9));
    for (long k = 0; k <= n; ++k)
        out.push_back(snap(start_um + k * step_um));
    if (!refine_near.empty()) {
        if (!(fine_step_um > 0.0))
            throw Error(ErrorCode::InvalidArgument, "refinement step must be positive");
        for (double c : refine_near) {
            const long k0 = static_cast<long>(std::ceil((c - fine_halfwidth_um) / fine_step_um - 1e-9));
            const long k1 = static_cast<long>(std::floor((c + fine_halfwidth_um) / fine_step_um + 1e-9));
            for (long k = k0; k <= k1; ++k) {
                const double l = snap(k * fine_step_um);
                if (l >= start_um - 1e-12 && l <= stop_um + 1e-12)
                    out.push_back(l);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-7; }),
              out.end());
    return out;
}

std::vector<double> default_wavelength_grid() { return wavelength_grid(1.40, 4.20, 0.05); }

DispersionCurve build_curve(const modes::WaveguideGeometry& geom, const materials::Library& lib,
                            const std::vector<double>& lambdas_um, const BuildOptions& opts) {
    geom.validate();
    const std::string hash = geometry_hash(geom, opts.fd);
    const std::size_t n = lambdas_um.size();
    std::vector<double> neff(n, 0.0);
    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < n; ++k)
        if (!(opts.cache && opts.cache->lookup(hash, lambdas_um[k], neff[k])))
            todo.push_back(k);
    spdlog::debug("dispersion {}: {} cached, {} to solve", hash, n - todo.size(), todo.size());

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < todo.size(); t = next++) {
            const std::size_t k = todo[t];
            try {
                neff[k] = modes::solve_rect_mode(geom, lib, lambdas_um[k], opts.fd).n_eff;
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(todo.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t)
            pool.emplace_back(worker);
        worker();
    }
    // Report the failure at the shortest wavelength so reruns fail identically.
    for (std::size_t k = 0; k < n; ++k)
        if (errors[k])
            std::rethrow_exception(errors[k]);
    if (opts.cache) {
        for (std::size_t k : todo)
            opts.cache->store(hash, lambdas_um[k], neff[k]);
    }

    std::vector<Sample> samples(n);
    for (std::size_t k = 0; k < n; ++k)
        samples[k] = {lambdas_um[k], neff[k]};
    return DispersionCurve(std::move(samples), hash);
}

DispersionCurve build_curve(const modes::FiberGeometry& geom, const materials::Library& lib,
                            const std::vector<double>& lambdas_um) {
    geom.validate();
    const auto core = lib.get(geom.core);
    const auto clad = lib.get(geom.cladding);
    std::vector<Sample> samples;
    samples.reserve(lambdas_um.size());
    for (double l : lambdas_um)
        samples.push_back(
            {l, modes::solve_he11(core->refractive_index(l), clad->refractive_index(l), geom.core_radius_um, l).n_eff});
    return DispersionCurve(std::move(samples), geometry_hash(geom));
}

} // namespace sfwm::dispersion
