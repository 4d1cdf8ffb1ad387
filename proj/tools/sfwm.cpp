#include "sfwm/commands.hpp"
#include "sfwm/config.hpp"
#include "sfwm/error.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace sfwm;

struct Common {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::string cache;
    std::string grid_step;
    bool json = false;
    bool csv = false;
    int threads = 0;
    bool verbose = false;
};

config::RunConfig load_config(const Common& c) {
    if (c.config_path.empty() == c.preset.empty())
        throw Error(ErrorCode::Config, "give exactly one of --config and --preset");
    config::RunConfig cfg = c.preset.empty() ? config::load(c.config_path) : config::preset(c.preset);
    if (!c.cache.empty())
        cfg.compute.cache = c.cache;
    if (!c.grid_step.empty())
        cfg.compute.grid_step_um = config::parse_quantity(c.grid_step, config::Dim::Length);
    if (c.threads > 0)
        cfg.compute.threads = c.threads;
    if (!c.out_dir.empty())
        cfg.outputs.dir = c.out_dir;
    if (c.csv)
        cfg.outputs.csv = true;
    if (c.json)
        cfg.outputs.csv = false;
    cfg.validate();
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text))
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

void emit(const std::string& command, const config::RunConfig& cfg, const cli::Output& out) {
    const std::string main = cfg.outputs.csv ? out.csv : cli::render(out.json);
    std::cout << main;
    if (cfg.outputs.dir.empty())
        return;
    const std::filesystem::path dir(cfg.outputs.dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    write_file(dir / (command + ".json"), cli::render(out.json));
    write_file(dir / (command + ".csv"), out.csv);
    for (const auto& [name, text] : out.files)
        write_file(dir / (command + "_" + name), text);
}

design::Range parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw Error(ErrorCode::Config, "range '" + text + "' must be lo,hi,step");
    return {config::parse_quantity(parts[0], config::Dim::Length), config::parse_quantity(parts[1], config::Dim::Length),
            config::parse_quantity(parts[2], config::Dim::Length)};
}

void apply_idler_band(config::RunConfig& cfg, const std::string& band) {
    if (band.empty())
        return;
    if (band == "c" || band == "C") {
        cfg.design.idler_min_um = design::kCBand.lo_um;
        cfg.design.idler_max_um = design::kCBand.hi_um;
        return;
    }
    const auto comma = band.find(',');
    if (comma == std::string::npos)
        throw Error(ErrorCode::Config, "idler band must be 'c' or lo,hi");
    cfg.design.idler_min_um = config::parse_quantity(band.substr(0, comma), config::Dim::Length);
    cfg.design.idler_max_um = config::parse_quantity(band.substr(comma + 1), config::Dim::Length);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spontaneous four-wave mixing pair-source toolkit"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config_path, "Run configuration file");
    app.add_option("--preset", common.preset, "Built-in scenario: wCH4, wNO2, wCOM, alibart");
    app.add_option("--out", common.out_dir, "Directory for JSON/CSV reports");
    app.add_option("--cache", common.cache, "Mode cache file");
    app.add_option("--grid-step", common.grid_step, "Mode solver grid step, e.g. 20nm");
    auto* json_flag = app.add_flag("--json", common.json, "Print the JSON report (default)");
    app.add_flag("--csv", common.csv, "Print the CSV table")->excludes(json_flag);
    app.add_option("--threads", common.threads, "Worker threads for dispersion builds")->check(CLI::PositiveNumber);
    app.add_flag("-v,--verbose", common.verbose, "Log progress to stderr");

    auto* solve = app.add_subcommand("solve-mode", "Fundamental mode at one wavelength");
    std::string wavelength;
    std::string dump_field;
    solve->add_option("--wavelength", wavelength, "Wavelength, e.g. 3.905um")->required();
    solve->add_option("--dump-field", dump_field, "Write the sampled field to this CSV file");

    auto* pipeline = app.add_subcommand("pipeline", "Dispersion, phase matching, overlap, PGP and rates");
    std::string peak_power;
    pipeline->add_option("--peak-power", peak_power, "Override the peak pump power, e.g. 64.4mW");

    auto* alibart = app.add_subcommand("validate-alibart", "Fibre reference measurement at five pump powers");

    auto* design_cmd = app.add_subcommand("design", "Grid search over waveguide width and height");
    std::string target_signal, idler_band, width_range, height_range, pump_range;
    int top = 10;
    design_cmd->add_option("--target-signal", target_signal, "Target signal wavelength, e.g. 3.461um");
    design_cmd->add_option("--idler-band", idler_band, "'c' or lo,hi");
    design_cmd->add_option("--width-range", width_range, "lo,hi,step");
    design_cmd->add_option("--height-range", height_range, "lo,hi,step");
    design_cmd->add_option("--pump-range", pump_range, "lo,hi,step");
    design_cmd->add_option("--top", top, "Candidates listed in the JSON report");

    auto* tolerance = app.add_subcommand("tolerance", "Fabrication tolerance sweep with pump retuning");
    std::string delta;
    tolerance->add_option("--delta", delta, "Perturbation of width and height, e.g. 10nm");

    auto* pm = app.add_subcommand("pm-curve", "Phase-matching curve over a pump range");
    bool band_only = false;
    pm->add_option("--pump-range", pump_range, "lo,hi,step");
    pm->add_option("--idler-band", idler_band, "'c' or lo,hi");
    pm->add_flag("--idler-band-only", band_only, "Keep only points with the idler inside the band");

    auto* show = app.add_subcommand("show-config", "Print the resolved configuration");
    auto* presets = app.add_subcommand("presets", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto logger = spdlog::stderr_logger_mt("sfwm");
    spdlog::set_default_logger(logger);
    spdlog::set_level(common.verbose ? spdlog::level::info : spdlog::level::warn);

    try {
        if (presets->parsed()) {
            for (const auto& n : config::preset_names())
                std::cout << n << "\n";
            return 0;
        }
        config::RunConfig cfg = load_config(common);
        if (show->parsed()) {
            std::cout << config::serialize(cfg);
            return 0;
        }
        if (solve->parsed()) {
            const double l = config::parse_quantity(wavelength, config::Dim::Length);
            const auto out = cli::cmd_solve_mode(cfg, l, !dump_field.empty());
            if (!dump_field.empty())
                write_file(dump_field, out.files.at("field.csv"));
            emit("solve-mode", cfg, out);
        } else if (pipeline->parsed()) {
            std::optional<double> p;
            if (!peak_power.empty())
                p = config::parse_quantity(peak_power, config::Dim::Power);
            emit("pipeline", cfg, cli::cmd_pipeline(cfg, p));
        } else if (alibart->parsed()) {
            emit("validate-alibart", cfg, cli::cmd_validate_alibart(cfg));
        } else if (design_cmd->parsed()) {
            if (!target_signal.empty())
                cfg.design.target_signal_um = config::parse_quantity(target_signal, config::Dim::Length);
            apply_idler_band(cfg, idler_band);
            if (!width_range.empty())
                cfg.design.width = parse_range(width_range);
            if (!height_range.empty())
                cfg.design.height = parse_range(height_range);
            if (!pump_range.empty())
                cfg.design.pump = parse_range(pump_range);
            emit("design", cfg, cli::cmd_design(cfg, top));
        } else if (tolerance->parsed()) {
            if (!delta.empty())
                cfg.design.delta_um = config::parse_quantity(delta, config::Dim::Length);
            emit("tolerance", cfg, cli::cmd_tolerance(cfg));
        } else if (pm->parsed()) {
            if (!pump_range.empty())
                cfg.design.pump = parse_range(pump_range);
            apply_idler_band(cfg, idler_band);
            emit("pm-curve", cfg, cli::cmd_pm_curve(cfg, band_only));
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
