// Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. Waveguide scenarios share the mode cache of the build tree.

#include "sfwm/commands.hpp"
#include "sfwm/config.hpp"
#include "sfwm/constants.hpp"
#include "sfwm/fd_operator.hpp"
#include "sfwm/modes.hpp"
#include "sfwm/physics.hpp"

#include "synthetic.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sfwm;
using cli::Json;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  [%s] %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool within_rel(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

config::RunConfig with_cache(const std::string& name) {
    auto cfg = config::preset(name);
    cfg.compute.cache = SFWM_CACHE_PATH;
    return cfg;
}

struct DesignRow {
    const char* name;
    double lambda_p, lambda_s, lambda_i;
    double f_ppsi, gamma;
    double core, cladding, box;
    double alpha_si, alpha_silica, attenuation;
    double power_w;
};

const DesignRow kRows[] = {
    {"wCH4", 2.100, 3.265, 1.547, 1.05e12, 20.78, 92.2, 3.9, 3.9, 0.001, 0.7, 0.98, 24.1e-3},
    {"wNO2", 2.151, 3.461, 1.560, 2.90e12, 55.74, 91.3, 4.4, 4.3, 0.001, 1.0, 0.97, 9.2e-3},
    {"wCOM", 2.210, 3.905, 1.541, 9.69e11, 16.66, 85.3, 7.4, 7.3, 0.002, 7.3, 0.86, 32.2e-3},
};

void alibart_rates() {
    const auto out = cli::cmd_validate_alibart(config::preset("alibart"));
    bool ok = true;
    std::ostringstream d;
    for (const auto& r : out.json["rows"]) {
        const double ratio = r["ratio"].get<double>();
        ok = ok && std::abs(ratio - 1.0) <= 0.25;
        d << fmt("%.0fuW", r["mean_power_w"].get<double>() * 1e6) << " " << fmt("%.3g", r["rate_per_s"].get<double>())
          << "/" << fmt("%.3g", r["reference_per_s"].get<double>()) << "; ";
    }
    report("1", ok, "fibre detected rates within 25%", d.str());
}

void energy_conservation() {
    const double li_ref[] = {1.5478, 1.5604, 1.5411};
    bool ok = true;
    std::ostringstream d;
    for (std::size_t k = 0; k < 3; ++k) {
        const double li = 1.0 / (2.0 / kRows[k].lambda_p - 1.0 / kRows[k].lambda_s);
        ok = ok && std::abs(li - li_ref[k]) < 1e-3;
        d << kRows[k].name << " " << fmt("%.4f", li) << "; ";
    }
    report("2", ok, "energy conservation within 1 nm", d.str());
}

void waveguide_criteria(const std::map<std::string, Json>& runs, const std::map<std::string, double>& ratios) {
    bool pm_ok = true, f_ok = true, g_ok = true, pf_ok = true, pgp_ok = true, ratio_ok = true;
    std::ostringstream pm_d, f_d, g_d, pf_d, pgp_d, ratio_d;
    for (const auto& row : kRows) {
        const Json& j = runs.at(row.name);
        const double ls = j["phase_match"]["lambda_s_um"].get<double>();
        const double li = j["phase_match"]["lambda_i_um"].get<double>();
        pm_ok = pm_ok && std::abs(ls - row.lambda_s) <= 0.050 && std::abs(li - row.lambda_i) <= 0.015;
        pm_d << row.name << " " << fmt("%.4f", ls) << "/" << fmt("%.4f", li) << "; ";

        const double f = j["overlap"]["f_ppsi_per_m2"].get<double>();
        const double g = j["gamma_per_w_per_m"].get<double>();
        f_ok = f_ok && within_rel(f, row.f_ppsi, 0.15);
        g_ok = g_ok && within_rel(g, row.gamma, 0.15);
        f_d << row.name << " " << fmt("%.3g", f) << "; ";
        g_d << row.name << " " << fmt("%.2f", g) << "; ";

        const auto& pf = j["power_fractions"];
        const double core = pf["core"].get<double>() * 100.0;
        const double clad = pf["cladding"].get<double>() * 100.0;
        const double box = pf["box"].get<double>() * 100.0;
        pf_ok = pf_ok && std::abs(core - row.core) <= 2.0 && std::abs(clad - row.cladding) <= 2.0 &&
                std::abs(box - row.box) <= 2.0;
        pf_d << row.name << " " << fmt("%.1f", core) << "/" << fmt("%.1f", clad) << "/" << fmt("%.1f", box) << "; ";

        const double p = j["pgp"]["raw"].get<double>();
        pgp_ok = pgp_ok && p >= 0.025 && p <= 0.10;
        pgp_d << row.name << " " << fmt("%.4f", p) << "; ";
        const double r = ratios.at(row.name);
        ratio_ok = ratio_ok && std::abs(r - 4.0) <= 0.04;
        ratio_d << row.name << " " << fmt("%.4f", r) << "; ";
    }
    report("3", pm_ok, "phase-match solve (signal 50 nm, idler 15 nm)", pm_d.str());
    report("4a", f_ok, "f_ppsi within 15%", f_d.str());
    report("4b", g_ok, "gamma within 15%", g_d.str());

    bool att_ok = true;
    std::ostringstream att_d;
    for (const auto& row : kRows) {
        const PowerSplit split{row.core / 100.0, row.cladding / 100.0, row.box / 100.0};
        const double a = material_attenuation(split, row.alpha_si, row.alpha_silica, 0.02);
        att_ok = att_ok && std::round(a * 100.0) == std::round(row.attenuation * 100.0);
        att_d << row.name << " " << fmt("%.2f", a) << "; ";
    }
    report("5a", att_ok, "material attenuation to two decimals", att_d.str());
    report("5b", pf_ok, "solver power fractions within 2 points", pf_d.str());
    report("6a", pgp_ok, "pgp in [0.025, 0.10] at the design powers", pgp_d.str());
    report("6b", ratio_ok, "pgp(2P)/pgp(P) = 4 within 1%", ratio_d.str());

    const Json& com = runs.at("wCOM")["phase_match"];
    const double sep = (com["lambda_s_um"].get<double>() - com["lambda_i_um"].get<double>()) * 1e3;
    report("H", sep >= 2314.0 && sep <= 2414.0, "wCOM signal-idler separation in [2314, 2414] nm",
           fmt("%.1f nm", sep));
}

void raman_windows() {
    const double ref[][2] = {{2.358, 2.369}, {2.423, 2.433}, {2.498, 2.510}};
    bool ok = true;
    std::ostringstream d;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto [peak, dip] = raman_window(kRows[k].lambda_p);
        ok = ok && std::abs(peak - ref[k][0]) <= 0.002 && std::abs(dip - ref[k][1]) <= 0.002;
        d << kRows[k].name << " " << fmt("%.4f", peak) << "/" << fmt("%.4f", dip) << "; ";
    }
    report("7", ok, "Raman windows within 2 nm", d.str());
}

void filter_conversion() {
    const auto a = filter_to_frequency(570.0, 40.0);
    const auto b = filter_to_frequency(880.0, 40.0);
    const bool ok = std::abs(a.center_thz - 526.0) <= 0.5 && std::abs(a.bandwidth_thz - 36.9) <= 0.5 &&
                    std::abs(b.center_thz - 341.0) <= 0.5 && std::abs(b.bandwidth_thz - 15.5) <= 0.5;
    report("8", ok, "filter conversion within 0.5 THz",
           fmt("%.1f", a.center_thz) + "/" + fmt("%.1f", a.bandwidth_thz) + " and " + fmt("%.1f", b.center_thz) +
               "/" + fmt("%.1f", b.bandwidth_thz) + " THz");
}

void tolerance() {
    bool drift_ok = true, retune_ok = true;
    int retuned = 0;
    std::ostringstream dd, rd;
    for (const auto& row : kRows) {
        const auto out = cli::cmd_tolerance(with_cache(row.name));
        for (const auto& r : out.json["rows"]) {
            const std::string label = r["case"].get<std::string>();
            if (r["kind"] == "drift") {
                if (std::string(row.name) != "wCOM" && label[0] == 'b') {
                    const double ds = r["delta_lambda_s_nm"].get<double>();
                    drift_ok = drift_ok && std::abs(ds) < 5.0;
                    dd << row.name << " " << label << " " << fmt("%+.2f nm", ds) << "; ";
                }
            } else {
                ++retuned;
                const double dp = r["delta_lambda_p_nm"].get<double>();
                const bool in_band = r["idler_in_band"].get<bool>();
                retune_ok = retune_ok && std::abs(dp) < 10.0 && in_band;
                rd << row.name << " " << label << " " << fmt("%+.2f nm", dp) << (in_band ? "" : " (idler out)") << "; ";
            }
        }
    }
    report("9a", drift_ok, "height drift moves the signal by under 5 nm", dd.str());
    report("9b", retune_ok && retuned == 12, "retuned pump within 10 nm with the idler in 1.530-1.565 um",
           std::to_string(retuned) + " cases: " + rd.str());
}

void fd_order() {
    // Slab reference by bisection on the even TE dispersion relation.
    const double lam = 1.55, t = 0.22, n1 = 3.48, n2 = 1.444;
    const double k0 = 2.0 * kPi / lam;
    auto f = [&](double n) {
        const double kappa = k0 * std::sqrt(n1 * n1 - n * n);
        const double gam = k0 * std::sqrt(n * n - n2 * n2);
        return kappa * std::sin(kappa * t / 2.0) - gam * std::cos(kappa * t / 2.0);
    };
    double lo = std::sqrt(std::max(n2 * n2, n1 * n1 - std::pow(kPi / (k0 * t), 2))) + 1e-12, hi = n1 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        ((f(m) < 0.0) == (f(lo) < 0.0) ? lo : hi) = m;
    }
    const double ref = 0.5 * (lo + hi);
    std::vector<double> err;
    for (double h : {0.02, 0.01, 0.005, 0.0025}) {
        modes::FdProblem p;
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
        err.push_back(std::abs(modes::solve_fd_modes(p, lam, n1).front().n_eff - ref));
    }
    double min_order = 1e9;
    for (std::size_t k = 1; k < err.size(); ++k)
        min_order = std::min(min_order, std::log2(err[k - 1] / err[k]));
    report("10a", min_order >= 1.5 && err.back() < 1e-4, "FD convergence order and finest error",
           fmt("order %.2f", min_order) + fmt(", error %.2e", err.back()));
}

void fiber_residual() {
    materials::Library lib;
    double worst = 0.0;
    for (double l = 0.45; l <= 1.2; l += 0.05) {
        const double n1 = lib.get("silica")->refractive_index(l);
        const double n2 = lib.get("pcf_cladding_90")->refractive_index(l);
        worst = std::max(worst, std::abs(modes::solve_he11(n1, n2, 0.965, l).residual));
    }
    report("10b", worst < 1e-12, "fibre characteristic residual below 1e-12", fmt("%.2e", worst));
}

void analytic_properties() {
    const auto q = synthetic::Quartic{}.match_signal(3.9);
    const auto c = q.curve();
    PumpPulse p;
    p.lambda_um = q.lambda_p_um;
    p.duration_s = 5e-12;
    p.peak_power_w = 0.03;
    p.rep_rate_hz = 80e6;

    const double wp = q.wp();
    const OmegaWindow win{wp - 4e13, wp + 4e13};
    const auto g = jsd(c, 16.0, 0.02, p, win, win, 61, 61);
    double peak = 0.0, asym = 0.0;
    for (std::size_t s = 0; s < g.ws.size(); ++s)
        for (std::size_t i = 0; i < g.wi.size(); ++i) {
            peak = std::max(peak, g.at(s, i));
            asym = std::max(asym, std::abs(g.at(s, i) - g.at(i, s)));
        }
    report("10c", peak > 0.0 && asym <= 1e-10 * peak, "JSD exchange symmetry", fmt("max asymmetry %.2e", asym / peak));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dx(-5e13, 5e13);
    std::uniform_real_distribution<double> ds(omega_from_um(4.4), omega_from_um(2.3));
    bool bounds = true;
    for (int k = 0; k < 2000; ++k) {
        const double gv = jsd_factor_G(p.duration_s, dx(rng));
        bounds = bounds && gv >= 0.0 && gv <= 1.0;
        const double ws = ds(rng);
        const double wi = 2.0 * wp - ws + dx(rng) * 0.05;
        if (c.contains(wi)) {
            const double fv = jsd_factor_F(c, 0.02, wp, ws, wi);
            bounds = bounds && fv >= 0.0 && fv <= 1.0;
        }
    }
    report("10d", bounds, "G and F within [0, 1]", "2000 random samples");

    const double ls = q.root_signal_um();
    const FilterSpec fs{omega_from_um(ls), thz_to_omega(1.0)};
    const FilterSpec fi{2.0 * wp - fs.center_omega, thz_to_omega(1.0)};
    const auto r1 = compute_pgp(c, 16.0, 0.02, p, fs, fi);
    PgpOptions fine;
    fine.initial_resolution = 1024;
    const auto r2 = compute_pgp(c, 16.0, 0.02, p, fs, fi, fine);
    const double change = std::abs(r2.pgp - r1.pgp) / r1.pgp;
    report("10e", r1.error_estimate <= 0.01 * r1.pgp && change < 0.01, "PGP converged to 1%",
           fmt("estimate %.2e", r1.error_estimate / r1.pgp) + fmt(", resolution change %.2e", change));
}

} // namespace

int main() {
    spdlog::set_level(spdlog::level::warn);
    try {
        alibart_rates();
        energy_conservation();

        std::map<std::string, Json> runs;
        std::map<std::string, double> ratios;
        std::string first_com;
        for (const auto& row : kRows) {
            const auto cfg = with_cache(row.name);
            const auto out = cli::cmd_pipeline(cfg);
            runs[row.name] = out.json;
            if (std::string(row.name) == "wCOM")
                first_com = cli::render(out.json);
            const double p = out.json["pgp"]["raw"].get<double>();
            const double p2 = cli::cmd_pipeline(cfg, 2.0 * row.power_w).json["pgp"]["raw"].get<double>();
            ratios[row.name] = p2 / p;
        }
        waveguide_criteria(runs, ratios);
        raman_windows();
        filter_conversion();
        tolerance();
        fd_order();
        fiber_residual();
        analytic_properties();

        const auto alibart = config::preset("alibart");
        const bool fibre_same = cli::render(cli::cmd_pipeline(alibart).json) == cli::render(cli::cmd_pipeline(alibart).json);
        const bool com_same = cli::render(cli::cmd_pipeline(with_cache("wCOM")).json) == first_com;
        report("10f", fibre_same && com_same, "byte-identical reruns", "alibart and wCOM pipeline reports");
    } catch (const std::exception& e) {
        report("X", false, "acceptance run aborted", e.what());
    }
    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
