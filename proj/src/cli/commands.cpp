#include "sfwm/commands.hpp"

#include "sfwm/constants.hpp"
#include "sfwm/design.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/modes.hpp"
#include "sfwm/physics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace sfwm::cli {

namespace {

using config::RunConfig;
using config::Spectral;

// Owns the library, the optional on-disk cache and the build settings of one
// command invocation. The cache is flushed on destruction so that partial
// progress survives a failing stage.
class Workspace {
public:
    explicit Workspace(const RunConfig& cfg) : cfg_(cfg), lib_(cfg.library()) {
        if (!cfg.compute.cache.empty())
            cache_ = std::make_unique<dispersion::ModeCache>(cfg.compute.cache);
        build_.fd.grid_step_um = cfg.compute.grid_step_um;
        build_.cache = cache_.get();
        build_.threads = cfg.compute.threads;
    }
    ~Workspace() {
        if (cache_) {
            try {
                cache_->save();
            } catch (const std::exception& e) {
                spdlog::error("could not save mode cache: {}", e.what());
            }
        }
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    const materials::Library& lib() const { return lib_; }
    const dispersion::BuildOptions& build_options() const { return build_; }

    dispersion::DispersionCurve curve(const std::vector<double>& lambdas) const {
        if (cfg_.geometry)
            return curve(*cfg_.geometry, lambdas);
        return dispersion::build_curve(*cfg_.fiber, lib_, lambdas);
    }
    dispersion::DispersionCurve curve(const modes::WaveguideGeometry& g, const std::vector<double>& lambdas) const {
        return dispersion::build_curve(g, lib_, lambdas, build_);
    }

    modes::ModeSolution mode(double lambda_um) const {
        if (cfg_.geometry) {
            modes::FdOptions fd;
            fd.grid_step_um = cfg_.compute.grid_step_um;
            return modes::solve_rect_mode(*cfg_.geometry, lib_, lambda_um, fd);
        }
        modes::FiberOptions fo;
        fo.grid_step_um = cfg_.compute.grid_step_um;
        return modes::solve_fiber_mode(*cfg_.fiber, lib_, lambda_um, fo);
    }

    std::vector<double> coarse_grid() const {
        const auto& c = cfg_.compute;
        return dispersion::wavelength_grid(c.lambda_min_um, c.lambda_max_um, c.lambda_step_um);
    }
    std::vector<double> refined_grid(const std::vector<double>& centres) const {
        const auto& c = cfg_.compute;
        return dispersion::wavelength_grid(c.lambda_min_um, c.lambda_max_um, c.lambda_step_um, centres, c.fine_step_um,
                                           c.fine_halfwidth_um);
    }

private:
    const RunConfig& cfg_;
    materials::Library lib_;
    std::unique_ptr<dispersion::ModeCache> cache_;
    dispersion::BuildOptions build_;
};

double spectral_um(const Spectral& s) {
    return s.is_frequency ? kSpeedOfLight / s.value * 1e6 : s.value;
}

FilterSpec make_filter(double center_um, const Spectral& bw) {
    if (bw.is_frequency)
        return {omega_from_um(center_um), 2.0 * kPi * bw.value};
    return FilterSpec::from_wavelength(center_um, bw.value);
}

const std::string& core_name(const RunConfig& cfg) { return cfg.geometry ? cfg.geometry->core : cfg.fiber->core; }
const std::string& cladding_name(const RunConfig& cfg) {
    return cfg.geometry ? cfg.geometry->cladding : cfg.fiber->cladding;
}
double length_m(const RunConfig& cfg) { return cfg.geometry ? cfg.geometry->length_m : cfg.fiber->length_m; }

// The configured target signal wins; otherwise a fixed filter on the long
// wavelength side of the pump; otherwise the longest phase-matched signal.
std::optional<double> signal_target(const RunConfig& cfg) {
    if (cfg.design.target_signal_um)
        return cfg.design.target_signal_um;
    for (const auto& c : {cfg.filters.signal_center, cfg.filters.idler_center})
        if (c && spectral_um(*c) > cfg.pump.lambda_um)
            return spectral_um(*c);
    return std::nullopt;
}

design::PhaseMatchPoint choose_root(const dispersion::DispersionCurve& curve, const RunConfig& cfg,
                                    std::optional<double> target) {
    if (target)
        return design::nearest_root(curve, cfg.pump.lambda_um, *target);
    return design::phase_match_solve(curve, cfg.pump.lambda_um).back();
}

Json point_json(const design::PhaseMatchPoint& p) {
    return Json{{"lambda_p_um", p.lambda_p_um},
                {"lambda_s_um", p.lambda_s_um},
                {"lambda_i_um", p.lambda_i_um},
                {"residual_rad_per_m", p.residual}};
}

Json header(const char* command, const RunConfig& cfg) {
    Json j;
    j["schema"] = 1;
    j["command"] = command;
    j["name"] = cfg.name;
    j["structure"] = cfg.geometry ? cfg.geometry->canonical() : cfg.fiber->canonical();
    return j;
}

std::string fmt_row(const char* format, std::initializer_list<double> values) {
    // Fixed-format rows keep the CSV tables stable across platforms.
    std::string out;
    char buf[64];
    bool first = true;
    for (double v : values) {
        std::snprintf(buf, sizeof buf, format, v);
        out += first ? "" : ",";
        out += buf;
        first = false;
    }
    return out + "\n";
}

// Curve, root, modes and nonlinear coefficient: everything that does not
// depend on the pump power.
struct Prepared {
    std::optional<dispersion::DispersionCurve> curve;
    design::PhaseMatchPoint root;
    double f_ppsi = 0.0;
    double a_eff_pump = 0.0;
    double n2 = 0.0;
    double gamma = 0.0;
    FilterSpec signal_filter;
    FilterSpec idler_filter;
    modes::PowerFractions fractions;
    double alpha_core = 0.0;
    double alpha_cladding = 0.0;
    double attenuation = 1.0;
    Json group_index;
};

Prepared prepare(const RunConfig& cfg, const Workspace& ws) {
    Prepared p;
    const auto target = signal_target(cfg);
    p.curve.emplace(ws.curve(ws.coarse_grid()));
    p.root = choose_root(*p.curve, cfg, target);
    if (cfg.compute.refine) {
        p.curve.emplace(ws.curve(ws.refined_grid({p.root.lambda_p_um, p.root.lambda_s_um, p.root.lambda_i_um})));
        p.root = choose_root(*p.curve, cfg, target ? target : std::optional<double>(p.root.lambda_s_um));
    }
    spdlog::info("phase matched: pump {:.4f} um, signal {:.4f} um, idler {:.4f} um", p.root.lambda_p_um,
                 p.root.lambda_s_um, p.root.lambda_i_um);

    const auto mp = ws.mode(p.root.lambda_p_um);
    p.a_eff_pump = modes::effective_area(mp.field);
    std::optional<modes::ModeSolution> ms;
    if (cfg.geometry) {
        ms.emplace(ws.mode(p.root.lambda_s_um));
        const auto mi = ws.mode(p.root.lambda_i_um);
        p.f_ppsi = modes::overlap_integral(mp, *ms, mi, cfg.compute.overlap);
    } else {
        // Fibre scenario: the four-field overlap is replaced by the inverse
        // effective area of the pump mode.
        p.f_ppsi = 1.0 / p.a_eff_pump;
    }
    const auto core = ws.lib().get(core_name(cfg));
    p.n2 = core->nonlinear_index(p.root.lambda_p_um);
    p.gamma = gamma(p.n2, p.f_ppsi, p.root.lambda_p_um);

    const auto& f = cfg.filters;
    p.signal_filter =
        make_filter(f.signal_center ? spectral_um(*f.signal_center) : p.root.lambda_s_um, f.signal_bandwidth);
    p.idler_filter = make_filter(f.idler_center ? spectral_um(*f.idler_center) : p.root.lambda_i_um, f.idler_bandwidth);

    for (auto [key, l] : {std::pair{"pump", p.root.lambda_p_um}, std::pair{"signal", p.root.lambda_s_um},
                          std::pair{"idler", p.root.lambda_i_um}})
        p.group_index[key] = p.curve->group_index(omega_from_um(l));

    if (cfg.geometry) {
        p.fractions = modes::power_fractions(*ms, *cfg.geometry);
        p.alpha_core = core->absorption(p.root.lambda_s_um);
        p.alpha_cladding = ws.lib().get(cladding_name(cfg))->absorption(p.root.lambda_s_um);
        p.attenuation = material_attenuation({p.fractions.core, p.fractions.cladding, p.fractions.box}, p.alpha_core,
                                             p.alpha_cladding, cfg.geometry->length_m);
    } else {
        p.fractions = modes::power_fractions(mp.field);
    }
    return p;
}

struct Evaluated {
    PgpResult pgp;
    double pgp_attenuated = 0.0;
    double pgr = 0.0;
    double detected = 0.0;
};

Evaluated evaluate(const RunConfig& cfg, const Prepared& p, double peak_power_w) {
    PumpPulse pulse = cfg.pulse();
    pulse.lambda_um = p.root.lambda_p_um;
    pulse.peak_power_w = peak_power_w;
    PgpOptions po;
    po.initial_resolution = cfg.compute.pgp_resolution;
    po.rel_tolerance = cfg.compute.pgp_tolerance;
    Evaluated e;
    e.pgp = compute_pgp(*p.curve, p.gamma, length_m(cfg), pulse, p.signal_filter, p.idler_filter, po);
    e.pgp_attenuated = e.pgp.pgp * p.attenuation;
    e.pgr = pgr(e.pgp_attenuated, cfg.pump.rep_rate_hz);
    e.detected = detected_rate(e.pgr, cfg.chain);
    return e;
}

Json filter_json(const FilterSpec& f) {
    return Json{{"center_um", um_from_omega(f.center_omega)},
                {"center_thz", omega_to_thz(f.center_omega)},
                {"bandwidth_thz", omega_to_thz(f.bandwidth_omega)}};
}

void require_geometry(const RunConfig& cfg, const char* command) {
    if (!cfg.geometry)
        throw Error(ErrorCode::Config, std::string(command) + " needs a [geometry] section");
}

} // namespace

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Config:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
        return 2;
    case ErrorCode::NotConverged:
    case ErrorCode::QuadratureNotConverged:
        return 3;
    default:
        return 1;
    }
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

Output cmd_solve_mode(const RunConfig& cfg, double lambda_um, bool dump_field) {
    Workspace ws(cfg);
    const auto sol = ws.mode(lambda_um);
    const auto fr = cfg.geometry ? modes::power_fractions(sol, *cfg.geometry) : modes::power_fractions(sol.field);
    Output out;
    out.json = header("solve-mode", cfg);
    out.json["lambda_um"] = lambda_um;
    out.json["n_eff"] = sol.n_eff;
    out.json["a_eff_m2"] = modes::effective_area(sol.field);
    out.json["polarization"] = sol.polarization == modes::Polarization::TE ? "TE" : "TM";
    out.json["te_fraction"] = sol.te_fraction;
    out.json["boundary_ratio"] = sol.boundary_ratio;
    out.json["power_fractions"] = Json{{"core", fr.core}, {"cladding", fr.cladding}, {"box", fr.box}};
    const auto& g = sol.field.grid;
    out.json["grid"] = Json{{"nx", g.nx}, {"ny", g.ny}, {"dx_um", g.dx_um}, {"dy_um", g.dy_um}};
    out.csv = "lambda_um,n_eff,a_eff_um2,core_fraction,cladding_fraction,box_fraction\n" +
              fmt_row("%.10g", {lambda_um, sol.n_eff, out.json["a_eff_m2"].get<double>() * 1e12, fr.core,
                                fr.cladding, fr.box});
    if (dump_field) {
        std::string s = "x_um,y_um,region,ex_re,ex_im,ey_re,ey_im,ez_re,ez_im,hx_re,hx_im,hy_re,hy_im,hz_re,hz_im\n";
        const auto& f = sol.field;
        char buf[512];
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const auto k = g.index(i, j);
                std::snprintf(buf, sizeof buf, "%.6f,%.6f,%d,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n",
                              g.x(i), g.y(j), static_cast<int>(f.region[k]), f.ex[k].real(), f.ex[k].imag(),
                              f.ey[k].real(), f.ey[k].imag(), f.ez[k].real(), f.ez[k].imag(), f.hx[k].real(),
                              f.hx[k].imag(), f.hy[k].real(), f.hy[k].imag(), f.hz[k].real(), f.hz[k].imag());
                s += buf;
            }
        out.files["field.csv"] = std::move(s);
    }
    return out;
}

Output cmd_pipeline(const RunConfig& cfg, std::optional<double> peak_power_w) {
    Workspace ws(cfg);
    const Prepared p = prepare(cfg, ws);
    const double power = peak_power_w.value_or(cfg.peak_power_w());
    const Evaluated e = evaluate(cfg, p, power);

    Output out;
    Json& j = out.json;
    j = header("pipeline", cfg);
    Json samples = Json::array();
    for (const auto& s : p.curve->samples())
        samples.push_back(Json::array({s.lambda_um, s.n_eff}));
    j["dispersion"] = Json{{"geometry_hash", p.curve->geometry_hash()},
                           {"leave_one_out_error", p.curve->leave_one_out_error()},
                           {"samples", samples}};
    j["phase_match"] = point_json(p.root);
    j["group_index"] = p.group_index;
    j["overlap"] = Json{{"f_ppsi_per_m2", p.f_ppsi}, {"a_eff_pump_m2", p.a_eff_pump}};
    j["n2_m2_per_w"] = p.n2;
    j["gamma_per_w_per_m"] = p.gamma;
    j["pump"] = Json{{"peak_power_w", power},
                     {"duration_s", cfg.pump.duration_s},
                     {"rep_rate_hz", cfg.pump.rep_rate_hz},
                     {"energy_j", 2.0 * power * cfg.pump.duration_s}};
    j["filters"] = Json{{"signal", filter_json(p.signal_filter)}, {"idler", filter_json(p.idler_filter)}};
    j["pgp"] = Json{{"raw", e.pgp.pgp},
                    {"error_estimate", e.pgp.error_estimate},
                    {"resolution", e.pgp.resolution},
                    {"peak_signal_um", e.pgp.peak_signal_um},
                    {"peak_idler_um", e.pgp.peak_idler_um}};
    j["power_fractions"] = Json{{"core", p.fractions.core}, {"cladding", p.fractions.cladding}, {"box", p.fractions.box}};
    j["attenuation"] = Json{{"alpha_core_db_cm", p.alpha_core},
                            {"alpha_cladding_db_cm", p.alpha_cladding},
                            {"a_material", p.attenuation}};
    j["pgp_attenuated"] = e.pgp_attenuated;
    j["pgr_per_s"] = e.pgr;
    j["detection_factor"] = cfg.chain.factor();
    j["detected_rate_per_s"] = e.detected;

    out.csv = "lambda_p_um,lambda_s_um,lambda_i_um,f_ppsi_per_m2,gamma_per_w_per_m,peak_power_w,pgp,a_material,"
              "pgp_attenuated,pgr_per_s,detected_rate_per_s\n" +
              fmt_row("%.10g", {p.root.lambda_p_um, p.root.lambda_s_um, p.root.lambda_i_um, p.f_ppsi, p.gamma, power,
                                e.pgp.pgp, p.attenuation, e.pgp_attenuated, e.pgr, e.detected});

    std::ostringstream disp;
    p.curve->write_csv(disp);
    out.files["dispersion.csv"] = disp.str();

    PumpPulse pulse = cfg.pulse();
    pulse.lambda_um = p.root.lambda_p_um;
    pulse.peak_power_w = power;
    const auto grid = jsd(*p.curve, p.gamma, length_m(cfg), pulse, window_around(p.signal_filter),
                          window_around(p.idler_filter), cfg.compute.jsd_resolution, cfg.compute.jsd_resolution);
    std::ostringstream js;
    grid.write_csv(js);
    out.files["jsd.csv"] = js.str();
    return out;
}

const std::vector<AlibartReference>& alibart_reference() {
    static const std::vector<AlibartReference> ref = {
        {960e-6, 8.70e6}, {660e-6, 4.29e6}, {490e-6, 2.42e6}, {340e-6, 1.19e6}, {200e-6, 4.20e5}};
    return ref;
}

Output cmd_validate_alibart(const RunConfig& cfg) {
    if (!cfg.fiber)
        throw Error(ErrorCode::Config, "validate-alibart needs a [fiber] section");
    if (!(cfg.pump.rep_rate_hz > 0.0))
        throw Error(ErrorCode::Config, "validate-alibart needs a repetition rate");
    Workspace ws(cfg);
    const Prepared p = prepare(cfg, ws);
    Output out;
    out.json = header("validate-alibart", cfg);
    out.json["phase_match"] = point_json(p.root);
    out.json["a_eff_pump_m2"] = p.a_eff_pump;
    out.json["gamma_per_w_per_m"] = p.gamma;
    out.json["filters"] = Json{{"signal", filter_json(p.signal_filter)}, {"idler", filter_json(p.idler_filter)}};
    out.json["detection_factor"] = cfg.chain.factor();
    out.csv = "p_mean_uw,p_peak_w,pgp,rate_per_s,reference_per_s,ratio\n";
    Json rows = Json::array();
    for (const auto& r : alibart_reference()) {
        const double peak = peak_power_from_mean(r.mean_power_w, cfg.pump.rep_rate_hz, cfg.pump.duration_s);
        const Evaluated e = evaluate(cfg, p, peak);
        rows.push_back(Json{{"mean_power_w", r.mean_power_w},
                            {"peak_power_w", peak},
                            {"pgp", e.pgp.pgp},
                            {"rate_per_s", e.detected},
                            {"reference_per_s", r.rate_per_s},
                            {"ratio", e.detected / r.rate_per_s}});
        out.csv += fmt_row("%.6g", {r.mean_power_w * 1e6, peak, e.pgp.pgp, e.detected, r.rate_per_s,
                                    e.detected / r.rate_per_s});
    }
    out.json["rows"] = rows;
    return out;
}

Output cmd_design(const RunConfig& cfg, int top) {
    require_geometry(cfg, "design");
    if (!cfg.design.target_signal_um)
        throw Error(ErrorCode::Config, "design needs [design] target_signal");
    Workspace ws(cfg);
    design::DesignTarget target;
    target.signal_um = *cfg.design.target_signal_um;
    target.idler_band = {cfg.design.idler_min_um, cfg.design.idler_max_um};
    target.pump = cfg.design.pump;
    target.width = cfg.design.width;
    target.height = cfg.design.height;
    design::GridSearchOptions go;
    go.base = *cfg.geometry;
    go.build = ws.build_options();
    go.refine = cfg.compute.refine;
    go.coarse_step_um = cfg.compute.lambda_step_um;
    go.fine_step_um = cfg.compute.fine_step_um;
    go.fine_halfwidth_um = cfg.compute.fine_halfwidth_um;
    const auto ranked = design::grid_search(target, ws.lib(), go);

    Output out;
    out.json = header("design", cfg);
    out.json["target_signal_um"] = target.signal_um;
    out.json["idler_band_um"] = Json::array({target.idler_band.lo_um, target.idler_band.hi_um});
    Json list = Json::array();
    out.csv = "width_um,height_um,lambda_p_um,lambda_s_um,lambda_i_um,score_nm\n";
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        const auto& c = ranked[k];
        if (static_cast<int>(k) < top) {
            Json row = point_json(c.point);
            row["width_um"] = c.geometry.width_um;
            row["height_um"] = c.geometry.height_um;
            row["score_nm"] = c.score_um * 1e3;
            list.push_back(row);
        }
        out.csv += fmt_row("%.6f", {c.geometry.width_um, c.geometry.height_um, c.point.lambda_p_um,
                                    c.point.lambda_s_um, c.point.lambda_i_um, c.score_um * 1e3});
    }
    out.json["evaluated"] = ranked.size();
    out.json["candidates"] = list;
    return out;
}

Output cmd_tolerance(const RunConfig& cfg) {
    require_geometry(cfg, "tolerance");
    Workspace ws(cfg);
    // The nominal root fixes the refinement centres that every perturbed curve
    // is sampled at, and its signal is what the retuned pump must restore.
    const auto nominal_curve = ws.curve(ws.coarse_grid());
    const auto target = signal_target(cfg);
    auto nominal = choose_root(nominal_curve, cfg, target);
    std::vector<double> grid = ws.coarse_grid();
    if (cfg.compute.refine) {
        grid = ws.refined_grid({nominal.lambda_p_um, nominal.lambda_s_um, nominal.lambda_i_um});
        nominal = choose_root(ws.curve(grid), cfg, target ? target : std::optional<double>(nominal.lambda_s_um));
    }
    const double target_signal = nominal.lambda_s_um;
    const auto rows = design::tolerance_sweep(
        *cfg.geometry, target_signal, cfg.pump.lambda_um,
        [&](const modes::WaveguideGeometry& g) { return ws.curve(g, grid); }, cfg.design.delta_um);

    Output out;
    out.json = header("tolerance", cfg);
    out.json["target_signal_um"] = target_signal;
    out.json["nominal"] = point_json(nominal);
    const design::Band band{cfg.design.idler_min_um, cfg.design.idler_max_um};
    Json list = Json::array();
    out.csv = "case,kind,width_um,height_um,lambda_p_um,lambda_s_um,lambda_i_um,delta_lambda_p_nm,"
              "delta_lambda_s_nm,idler_in_band\n";
    for (const auto& r : rows) {
        for (const auto& [kind, pt] : {std::pair{"drift", r.drift}, std::pair{"retuned", r.retuned}}) {
            Json row = point_json(pt);
            row["case"] = r.label;
            row["kind"] = kind;
            row["width_um"] = r.geometry.width_um;
            row["height_um"] = r.geometry.height_um;
            row["delta_lambda_p_nm"] = (pt.lambda_p_um - cfg.pump.lambda_um) * 1e3;
            row["delta_lambda_s_nm"] = (pt.lambda_s_um - nominal.lambda_s_um) * 1e3;
            row["idler_in_band"] = band.contains(pt.lambda_i_um);
            list.push_back(row);
            out.csv += r.label + "," + kind + "," +
                       fmt_row("%.6f", {r.geometry.width_um, r.geometry.height_um, pt.lambda_p_um, pt.lambda_s_um,
                                        pt.lambda_i_um, row["delta_lambda_p_nm"].get<double>(),
                                        row["delta_lambda_s_nm"].get<double>()});
            out.csv.back() = ',';
            out.csv += band.contains(pt.lambda_i_um) ? "true\n" : "false\n";
        }
    }
    out.json["rows"] = list;
    return out;
}

Output cmd_pm_curve(const RunConfig& cfg, bool idler_band_only) {
    Workspace ws(cfg);
    std::vector<double> grid = ws.coarse_grid();
    if (cfg.compute.refine) {
        // Refine around the nominal operating point when there is one.
        try {
            const auto root = choose_root(ws.curve(grid), cfg, signal_target(cfg));
            grid = ws.refined_grid({root.lambda_p_um, root.lambda_s_um, root.lambda_i_um});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoRoot && e.code() != ErrorCode::OutOfRange)
                throw;
        }
    }
    const auto curve = ws.curve(grid);
    std::optional<design::Band> band;
    if (idler_band_only)
        band = design::Band{cfg.design.idler_min_um, cfg.design.idler_max_um};
    const auto& r = cfg.design.pump;
    const auto entries = design::phase_match_curve(curve, r.lo, r.hi, r.step, band);

    Output out;
    out.json = header("pm-curve", cfg);
    Json list = Json::array();
    for (const auto& e : entries)
        for (const auto& pt : e.points)
            list.push_back(point_json(pt));
    out.json["points"] = list;
    std::ostringstream os;
    design::write_curve_csv(os, entries);
    out.csv = os.str();
    return out;
}

} // namespace sfwm::cli
