#include "sfwm/config.hpp"

#include "sfwm/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sfwm::config {

namespace {

struct Unit {
    const char* name;
    Dim dim;
    int exp10; // power of ten relative to the SI-like base of the dimension
};

// Bases: m, s, W, Hz, dB/cm, um², m²/W.
constexpr Unit kUnits[] = {
    {"m", Dim::Length, 0},          {"cm", Dim::Length, -2},         {"mm", Dim::Length, -3},
    {"um", Dim::Length, -6},        {"\xC2\xB5m", Dim::Length, -6},  {"nm", Dim::Length, -9},
    {"pm", Dim::Length, -12},       {"s", Dim::Time, 0},             {"ms", Dim::Time, -3},
    {"us", Dim::Time, -6},          {"ns", Dim::Time, -9},           {"ps", Dim::Time, -12},
    {"fs", Dim::Time, -15},         {"W", Dim::Power, 0},            {"mW", Dim::Power, -3},
    {"uW", Dim::Power, -6},         {"\xC2\xB5W", Dim::Power, -6},   {"nW", Dim::Power, -9},
    {"Hz", Dim::Frequency, 0},      {"kHz", Dim::Frequency, 3},      {"MHz", Dim::Frequency, 6},
    {"GHz", Dim::Frequency, 9},     {"THz", Dim::Frequency, 12},     {"dB/cm", Dim::Attenuation, 0},
    {"dBcm", Dim::Attenuation, 0},  {"dB/m", Dim::Attenuation, -2},  {"um2", Dim::Area, 0},
    {"nm2", Dim::Area, -6},         {"m2", Dim::Area, 12},           {"m2/W", Dim::NonlinearIndex, 0},
    {"cm2/W", Dim::NonlinearIndex, -4}, {"um2/W", Dim::NonlinearIndex, -12},
};

// Canonical unit exponents: µm, s, W, Hz, dB/cm, µm², m²/W.
int canonical_exp(Dim d) {
    switch (d) {
    case Dim::Length: return -6;
    default: return 0;
    }
}

const char* dim_name(Dim d) {
    switch (d) {
    case Dim::Length: return "length";
    case Dim::Time: return "time";
    case Dim::Power: return "power";
    case Dim::Frequency: return "frequency";
    case Dim::Attenuation: return "attenuation";
    case Dim::Area: return "area";
    case Dim::NonlinearIndex: return "nonlinear index";
    case Dim::None: return "dimensionless";
    }
    return "?";
}

// Multiplying by an exact power of ten (or dividing by one) keeps a value
// that is written and read in the same unit bit-identical.
double scale10(double x, int k) {
    double p = 1.0;
    for (int i = 0; i < std::abs(k); ++i)
        p *= 10.0;
    return k >= 0 ? x * p : x / p;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

// Splits "<number><ws><unit>" and returns the unit part (possibly empty).
double split_number(std::string_view text, std::string_view& unit) {
    text = trim(text);
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+')
        ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || !std::isfinite(v))
        fail("'" + std::string(text) + "' is not a number");
    unit = trim(std::string_view(res.ptr, static_cast<std::size_t>(last - res.ptr)));
    return v;
}

const Unit* find_unit(std::string_view u) {
    for (const Unit& x : kUnits)
        if (u == x.name)
            return &x;
    return nullptr;
}

double parse_to(std::string_view text, Dim dim, int target_exp) {
    std::string_view unit;
    const double v = split_number(text, unit);
    if (dim == Dim::None) {
        if (!unit.empty())
            fail("'" + std::string(trim(text)) + "' should be a plain number");
        return v;
    }
    if (unit.empty())
        fail("'" + std::string(trim(text)) + "' needs a " + dim_name(dim) + " unit");
    const Unit* u = find_unit(unit);
    if (!u || u->dim != dim)
        fail("unit '" + std::string(unit) + "' is not a " + dim_name(dim) + " unit");
    return scale10(v, u->exp10 - target_exp);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto p = s.find(',');
        out.push_back(trim(s.substr(0, p)));
        if (p == std::string_view::npos)
            break;
        s.remove_prefix(p + 1);
    }
    return out;
}

// Shortest text that reads back to the same double.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_bool(std::string_view v) {
    if (v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "off")
        return false;
    fail("'" + std::string(v) + "' is not a boolean");
}

int parse_int(std::string_view v) {
    int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        fail("'" + std::string(v) + "' is not an integer");
    return out;
}

design::Range parse_range(std::string_view v) {
    const auto parts = split_list(v);
    if (parts.size() != 3)
        fail("range '" + std::string(v) + "' must be 'lo, hi, step'");
    return {parse_to(parts[0], Dim::Length, -6), parse_to(parts[1], Dim::Length, -6),
            parse_to(parts[2], Dim::Length, -6)};
}

std::string spectral_text(const Spectral& s) { return num(s.value) + (s.is_frequency ? " Hz" : " um"); }

class Parser {
public:
    explicit Parser(std::string_view origin) : origin_(origin) {}

    RunConfig run(std::string_view text) {
        int lineno = 0;
        while (!text.empty()) {
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            ++lineno;
            try {
                handle_line(line);
            } catch (const Error& e) {
                std::string what = e.what();
                const auto colon = what.find(": ");
                if (colon != std::string::npos)
                    what = what.substr(colon + 2);
                fail(std::string(origin_) + ":" + std::to_string(lineno) + ": " + what);
            }
        }
        cfg_.validate();
        return cfg_;
    }

private:
    void handle_line(std::string_view line) {
        const auto hash = line.find('#');
        if (hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            return;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail("malformed section header");
            open_section(trim(line.substr(1, line.size() - 2)));
            return;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail("expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section_.empty())
            fail("key '" + key + "' outside any section");
        if (!seen_.insert(section_ + "." + key).second)
            fail("duplicate key '" + key + "' in [" + section_ + "]");
        assign(key, value);
    }

    void open_section(std::string_view name) {
        if (name.rfind("material ", 0) == 0) {
            CustomMaterial m;
            m.name = std::string(trim(name.substr(9)));
            if (m.name.empty())
                fail("material section needs a name");
            for (const auto& other : cfg_.materials)
                if (other.name == m.name)
                    fail("material '" + m.name + "' declared twice");
            cfg_.materials.push_back(m);
            section_ = "material " + m.name;
            return;
        }
        static const std::set<std::string, std::less<>> known = {
            "run", "geometry", "fiber", "materials", "pump", "filters", "detection", "compute", "design", "outputs"};
        if (!known.count(name))
            fail("unknown section [" + std::string(name) + "]");
        section_ = std::string(name);
        if (!sections_.insert(section_).second)
            fail("section [" + section_ + "] appears twice");
        if (section_ == "geometry")
            cfg_.geometry.emplace();
        if (section_ == "fiber")
            cfg_.fiber.emplace();
    }

    double len(std::string_view v) { return parse_to(v, Dim::Length, -6); }
    double len_m(std::string_view v) { return parse_to(v, Dim::Length, 0); }

    void unknown(const std::string& key) { fail("unknown key '" + key + "' in [" + section_ + "]"); }

    void assign(const std::string& key, std::string_view v) {
        if (section_ == "run") {
            if (key == "name")
                cfg_.name = std::string(v);
            else
                unknown(key);
        } else if (section_ == "geometry") {
            auto& g = *cfg_.geometry;
            if (key == "width") g.width_um = len(v);
            else if (key == "height") g.height_um = len(v);
            else if (key == "core") g.core = std::string(v);
            else if (key == "cladding") g.cladding = std::string(v);
            else if (key == "box") g.box = std::string(v);
            else if (key == "box_thickness") g.box_thickness_um = len(v);
            else if (key == "padding") g.padding_um = len(v);
            else if (key == "length") g.length_m = len_m(v);
            else unknown(key);
        } else if (section_ == "fiber") {
            auto& f = *cfg_.fiber;
            if (key == "core_radius") f.core_radius_um = len(v);
            else if (key == "core") f.core = std::string(v);
            else if (key == "cladding") f.cladding = std::string(v);
            else if (key == "length") f.length_m = len_m(v);
            else unknown(key);
        } else if (section_ == "materials") {
            if (key != "pcf_mixing")
                unknown(key);
            if (v == "index_mean") cfg_.pcf_mixing = materials::MixingRule::IndexMean;
            else if (v == "permittivity_mean") cfg_.pcf_mixing = materials::MixingRule::PermittivityMean;
            else fail("pcf_mixing must be index_mean or permittivity_mean");
        } else if (section_.rfind("material ", 0) == 0) {
            auto& m = cfg_.materials.back();
            if (key == "index") m.constant_index = parse_to(v, Dim::None, 0);
            else if (key == "sellmeier_b") set_sellmeier(m, v, true);
            else if (key == "sellmeier_c") set_sellmeier(m, v, false);
            else if (key == "valid_min") m.valid_min_um = len(v);
            else if (key == "valid_max") m.valid_max_um = len(v);
            else if (key == "n2") m.n2_m2_per_w = parse_to(v, Dim::NonlinearIndex, 0);
            else if (key == "absorption") m.absorption_db_cm = parse_to(v, Dim::Attenuation, 0);
            else unknown(key);
        } else if (section_ == "pump") {
            auto& p = cfg_.pump;
            if (key == "wavelength") p.lambda_um = len(v);
            else if (key == "duration") p.duration_s = parse_to(v, Dim::Time, 0);
            else if (key == "peak_power") p.peak_power_w = parse_to(v, Dim::Power, 0);
            else if (key == "mean_power") p.mean_power_w = parse_to(v, Dim::Power, 0);
            else if (key == "rep_rate") p.rep_rate_hz = parse_to(v, Dim::Frequency, 0);
            else if (key == "shape") {
                if (v == "sech") p.shape = PulseShape::Sech;
                else if (v == "gaussian") p.shape = PulseShape::Gaussian;
                else fail("shape must be sech or gaussian");
            } else unknown(key);
        } else if (section_ == "filters") {
            auto& f = cfg_.filters;
            auto centre = [&](std::optional<Spectral>& c) {
                if (v == "auto") c.reset();
                else c = parse_spectral(v);
            };
            if (key == "signal_center") centre(f.signal_center);
            else if (key == "idler_center") centre(f.idler_center);
            else if (key == "signal_bandwidth") f.signal_bandwidth = parse_spectral(v);
            else if (key == "idler_bandwidth") f.idler_bandwidth = parse_spectral(v);
            else unknown(key);
        } else if (section_ == "detection") {
            // Efficiencies are pure ratios, so plain numbers are the natural form.
            auto& c = cfg_.chain;
            if (key == "mu_s") c.mu_s = parse_to(v, Dim::None, 0);
            else if (key == "mu_i") c.mu_i = parse_to(v, Dim::None, 0);
            else if (key == "eta_s") c.eta_s = parse_to(v, Dim::None, 0);
            else if (key == "eta_i") c.eta_i = parse_to(v, Dim::None, 0);
            else unknown(key);
        } else if (section_ == "compute") {
            auto& c = cfg_.compute;
            if (key == "grid_step") c.grid_step_um = len(v);
            else if (key == "lambda_min") c.lambda_min_um = len(v);
            else if (key == "lambda_max") c.lambda_max_um = len(v);
            else if (key == "lambda_step") c.lambda_step_um = len(v);
            else if (key == "refine") c.refine = parse_bool(v);
            else if (key == "fine_step") c.fine_step_um = len(v);
            else if (key == "fine_halfwidth") c.fine_halfwidth_um = len(v);
            else if (key == "cache") c.cache = std::string(v);
            else if (key == "threads") c.threads = parse_int(v);
            else if (key == "pgp_tolerance") c.pgp_tolerance = parse_to(v, Dim::None, 0);
            else if (key == "pgp_resolution") c.pgp_resolution = parse_int(v);
            else if (key == "jsd_resolution") c.jsd_resolution = parse_int(v);
            else if (key == "overlap") {
                if (v == "dominant") c.overlap = modes::OverlapForm::DominantComponent;
                else if (v == "vector") c.overlap = modes::OverlapForm::TransverseVector;
                else fail("overlap must be dominant or vector");
            } else unknown(key);
        } else if (section_ == "design") {
            auto& d = cfg_.design;
            if (key == "target_signal") d.target_signal_um = len(v);
            else if (key == "idler_min") d.idler_min_um = len(v);
            else if (key == "idler_max") d.idler_max_um = len(v);
            else if (key == "pump_range") d.pump = parse_range(v);
            else if (key == "width_range") d.width = parse_range(v);
            else if (key == "height_range") d.height = parse_range(v);
            else if (key == "delta") d.delta_um = len(v);
            else unknown(key);
        } else if (section_ == "outputs") {
            if (key == "dir") cfg_.outputs.dir = std::string(v);
            else if (key == "format") {
                if (v == "json") cfg_.outputs.csv = false;
                else if (v == "csv") cfg_.outputs.csv = true;
                else fail("format must be json or csv");
            } else unknown(key);
        }
    }

    void set_sellmeier(CustomMaterial& m, std::string_view v, bool is_b) {
        const auto items = split_list(v);
        if (m.sellmeier.empty())
            m.sellmeier.resize(items.size(), {0.0, 0.0});
        else if (m.sellmeier.size() != items.size())
            fail("sellmeier_b and sellmeier_c must have the same length");
        for (std::size_t k = 0; k < items.size(); ++k) {
            if (is_b)
                m.sellmeier[k].b = parse_to(items[k], Dim::None, 0);
            else
                m.sellmeier[k].c_um2 = parse_to(items[k], Dim::Area, 0);
        }
    }

    std::string_view origin_;
    RunConfig cfg_;
    std::string section_;
    std::set<std::string> sections_;
    std::set<std::string> seen_;
};

constexpr const char* kWch4 = R"(# methane band: signal near 3.265 um, idler in the C-band
[run]
name = wCH4
[geometry]
width = 2.05 um
height = 0.75 um
length = 2 cm
[pump]
wavelength = 2.100 um
duration = 5 ps
peak_power = 24.1 mW
rep_rate = 80 MHz
shape = sech
[filters]
signal_bandwidth = 1 THz
idler_bandwidth = 1 THz
[design]
target_signal = 3.265 um
)";

constexpr const char* kWno2 = R"(# nitrogen dioxide band: signal near 3.461 um
[run]
name = wNO2
[geometry]
width = 2.23 um
height = 0.75 um
length = 2 cm
[pump]
wavelength = 2.151 um
duration = 5 ps
peak_power = 9.2 mW
rep_rate = 80 MHz
shape = sech
[filters]
signal_bandwidth = 1 THz
idler_bandwidth = 1 THz
[design]
target_signal = 3.461 um
)";

constexpr const char* kWcom = R"(# carbon monoxide band: signal near 3.905 um
[run]
name = wCOM
[geometry]
width = 2.35 um
height = 0.65 um
length = 2 cm
[pump]
wavelength = 2.210 um
duration = 5 ps
peak_power = 32.2 mW
rep_rate = 80 MHz
shape = sech
[filters]
signal_bandwidth = 1 THz
idler_bandwidth = 1 THz
[design]
target_signal = 3.905 um
)";

constexpr const char* kAlibart = R"(# photonic crystal fibre source in its step-index idealisation
[run]
name = alibart
[fiber]
core_radius = 0.965 um
core = silica
cladding = pcf_cladding_90
length = 0.2 m
[materials]
pcf_mixing = index_mean
[pump]
wavelength = 708.4 nm
duration = 2 ps
mean_power = 960 uW
rep_rate = 80 MHz
shape = sech
[filters]
signal_center = 570 nm
signal_bandwidth = 40 nm
idler_center = 880 nm
idler_bandwidth = 40 nm
[detection]
mu_s = 0.58
mu_i = 0.44
eta_s = 0.60
eta_i = 0.33
[compute]
lambda_min = 0.45 um
lambda_max = 1.20 um
lambda_step = 5 nm
refine = false
)";

} // namespace

double parse_quantity(std::string_view text, Dim dim) { return parse_to(text, dim, canonical_exp(dim)); }

Spectral parse_spectral(std::string_view text) {
    std::string_view unit;
    split_number(text, unit);
    const Unit* u = find_unit(unit);
    if (u && u->dim == Dim::Frequency)
        return {true, parse_to(text, Dim::Frequency, 0)};
    if (u && u->dim == Dim::Length)
        return {false, parse_to(text, Dim::Length, -6)};
    fail("'" + std::string(trim(text)) + "' needs a wavelength or frequency unit");
}

void RunConfig::validate() const {
    if (geometry.has_value() == fiber.has_value())
        fail("exactly one of [geometry] and [fiber] must be present");
    if (pump.peak_power_w.has_value() == pump.mean_power_w.has_value())
        fail("exactly one of peak_power and mean_power must be given");
    if (!(pump.lambda_um > 0.0))
        fail("pump wavelength must be positive");
    if (!(pump.duration_s > 0.0))
        fail("pump duration must be positive");
    if (pump.peak_power_w && !(*pump.peak_power_w >= 0.0))
        fail("peak power must be non-negative");
    if (pump.mean_power_w && !(*pump.mean_power_w >= 0.0))
        fail("mean power must be non-negative");
    if (pump.mean_power_w && !(pump.rep_rate_hz > 0.0))
        fail("mean_power needs a positive rep_rate");
    if (pump.rep_rate_hz < 0.0)
        fail("rep_rate must be non-negative");
    for (double e : {chain.mu_s, chain.mu_i, chain.eta_s, chain.eta_i})
        if (!(e >= 0.0 && e <= 1.0))
            fail("detection efficiencies must lie in [0, 1]");
    for (const Spectral* s : {&filters.signal_bandwidth, &filters.idler_bandwidth})
        if (!(s->value > 0.0))
            fail("filter bandwidths must be positive");
    if (!(compute.grid_step_um > 0.0) || !(compute.lambda_step_um > 0.0) || !(compute.fine_step_um > 0.0))
        fail("compute steps must be positive");
    if (!(compute.lambda_max_um > compute.lambda_min_um) || !(compute.lambda_min_um > 0.0))
        fail("lambda_min must be positive and below lambda_max");
    if (compute.threads < 1)
        fail("threads must be at least 1");
    if (!(compute.pgp_tolerance > 0.0) || compute.pgp_resolution < 8 || compute.jsd_resolution < 2)
        fail("invalid quadrature settings");
    if (!(design.idler_max_um > design.idler_min_um))
        fail("idler band is empty");
    for (const auto& m : materials) {
        if (materials::is_reserved_name(m.name))
            fail("material name '" + m.name + "' is reserved");
        if (m.constant_index.has_value() == !m.sellmeier.empty())
            fail("material '" + m.name + "' needs either index or sellmeier coefficients");
        if (!m.sellmeier.empty() && !(m.valid_max_um > m.valid_min_um))
            fail("material '" + m.name + "' needs a validity range");
    }
}

double RunConfig::peak_power_w() const {
    if (pump.peak_power_w)
        return *pump.peak_power_w;
    return peak_power_from_mean(pump.mean_power_w.value_or(0.0), pump.rep_rate_hz, pump.duration_s);
}

PumpPulse RunConfig::pulse() const {
    PumpPulse p;
    p.lambda_um = pump.lambda_um;
    p.duration_s = pump.duration_s;
    p.peak_power_w = peak_power_w();
    p.rep_rate_hz = pump.rep_rate_hz;
    p.shape = pump.shape;
    return p;
}

materials::Library RunConfig::library() const {
    materials::Library lib;
    lib.set_pcf_mixing(pcf_mixing);
    for (const auto& m : materials) {
        materials::IndexModel idx = materials::ConstantIndex{0.0};
        if (m.constant_index)
            idx = materials::ConstantIndex{*m.constant_index};
        else
            idx = materials::SellmeierModel(m.sellmeier, m.valid_min_um, m.valid_max_um);
        materials::WavelengthTable n2, alpha;
        if (m.n2_m2_per_w)
            n2 = materials::WavelengthTable({{1.0, *m.n2_m2_per_w}});
        if (m.absorption_db_cm)
            alpha = materials::WavelengthTable({{1.0, *m.absorption_db_cm}});
        lib.add(std::make_shared<const materials::MaterialModel>(m.name, std::move(idx), std::move(n2),
                                                                 std::move(alpha)));
    }
    return lib;
}

RunConfig parse(std::string_view text, std::string_view origin) { return Parser(origin).run(text); }

RunConfig load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string serialize(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# sfwm run configuration\n";
    if (!cfg.name.empty())
        os << "[run]\nname = " << cfg.name << "\n";
    if (cfg.geometry) {
        const auto& g = *cfg.geometry;
        os << "[geometry]\nwidth = " << num(g.width_um) << " um\nheight = " << num(g.height_um)
           << " um\ncore = " << g.core << "\ncladding = " << g.cladding << "\nbox = " << g.box
           << "\nbox_thickness = " << num(g.box_thickness_um) << " um\npadding = " << num(g.padding_um)
           << " um\nlength = " << num(g.length_m) << " m\n";
    }
    if (cfg.fiber) {
        const auto& f = *cfg.fiber;
        os << "[fiber]\ncore_radius = " << num(f.core_radius_um) << " um\ncore = " << f.core
           << "\ncladding = " << f.cladding << "\nlength = " << num(f.length_m) << " m\n";
    }
    os << "[materials]\npcf_mixing = "
       << (cfg.pcf_mixing == materials::MixingRule::IndexMean ? "index_mean" : "permittivity_mean") << "\n";
    for (const auto& m : cfg.materials) {
        os << "[material " << m.name << "]\n";
        if (m.constant_index)
            os << "index = " << num(*m.constant_index) << "\n";
        if (!m.sellmeier.empty()) {
            os << "sellmeier_b = ";
            for (std::size_t k = 0; k < m.sellmeier.size(); ++k)
                os << (k ? ", " : "") << num(m.sellmeier[k].b);
            os << "\nsellmeier_c = ";
            for (std::size_t k = 0; k < m.sellmeier.size(); ++k)
                os << (k ? ", " : "") << num(m.sellmeier[k].c_um2) << " um2";
            os << "\n";
        }
        os << "valid_min = " << num(m.valid_min_um) << " um\nvalid_max = " << num(m.valid_max_um) << " um\n";
        if (m.n2_m2_per_w)
            os << "n2 = " << num(*m.n2_m2_per_w) << " m2/W\n";
        if (m.absorption_db_cm)
            os << "absorption = " << num(*m.absorption_db_cm) << " dB/cm\n";
    }
    const auto& p = cfg.pump;
    os << "[pump]\nwavelength = " << num(p.lambda_um) << " um\nduration = " << num(p.duration_s) << " s\n";
    if (p.peak_power_w)
        os << "peak_power = " << num(*p.peak_power_w) << " W\n";
    if (p.mean_power_w)
        os << "mean_power = " << num(*p.mean_power_w) << " W\n";
    os << "rep_rate = " << num(p.rep_rate_hz) << " Hz\nshape = " << (p.shape == PulseShape::Sech ? "sech" : "gaussian")
       << "\n";
    const auto& f = cfg.filters;
    os << "[filters]\nsignal_center = " << (f.signal_center ? spectral_text(*f.signal_center) : "auto")
       << "\nidler_center = " << (f.idler_center ? spectral_text(*f.idler_center) : "auto")
       << "\nsignal_bandwidth = " << spectral_text(f.signal_bandwidth)
       << "\nidler_bandwidth = " << spectral_text(f.idler_bandwidth) << "\n";
    const auto& c = cfg.chain;
    os << "[detection]\nmu_s = " << num(c.mu_s) << "\nmu_i = " << num(c.mu_i) << "\neta_s = " << num(c.eta_s)
       << "\neta_i = " << num(c.eta_i) << "\n";
    const auto& k = cfg.compute;
    os << "[compute]\ngrid_step = " << num(k.grid_step_um) << " um\nlambda_min = " << num(k.lambda_min_um)
       << " um\nlambda_max = " << num(k.lambda_max_um) << " um\nlambda_step = " << num(k.lambda_step_um)
       << " um\nrefine = " << (k.refine ? "true" : "false") << "\nfine_step = " << num(k.fine_step_um)
       << " um\nfine_halfwidth = " << num(k.fine_halfwidth_um) << " um\n";
    if (!k.cache.empty())
        os << "cache = " << k.cache << "\n";
    os << "threads = " << k.threads << "\npgp_tolerance = " << num(k.pgp_tolerance)
       << "\npgp_resolution = " << k.pgp_resolution << "\njsd_resolution = " << k.jsd_resolution
       << "\noverlap = " << (k.overlap == modes::OverlapForm::DominantComponent ? "dominant" : "vector") << "\n";
    const auto& d = cfg.design;
    auto range = [](const design::Range& r) {
        return num(r.lo) + " um, " + num(r.hi) + " um, " + num(r.step) + " um";
    };
    os << "[design]\n";
    if (d.target_signal_um)
        os << "target_signal = " << num(*d.target_signal_um) << " um\n";
    os << "idler_min = " << num(d.idler_min_um) << " um\nidler_max = " << num(d.idler_max_um)
       << " um\npump_range = " << range(d.pump) << "\nwidth_range = " << range(d.width)
       << "\nheight_range = " << range(d.height) << "\ndelta = " << num(d.delta_um) << " um\n";
    os << "[outputs]\n";
    if (!cfg.outputs.dir.empty())
        os << "dir = " << cfg.outputs.dir << "\n";
    os << "format = " << (cfg.outputs.csv ? "csv" : "json") << "\n";
    return os.str();
}

RunConfig preset(std::string_view name) {
    static const std::map<std::string, const char*, std::less<>> presets = {
        {"wCH4", kWch4}, {"wNO2", kWno2}, {"wCOM", kWcom}, {"alibart", kAlibart}};
    const auto it = presets.find(name);
    if (it == presets.end())
        fail("unknown preset '" + std::string(name) + "'");
    return parse(it->second, "preset:" + std::string(name));
}

std::vector<std::string> preset_names() { return {"wCH4", "wNO2", "wCOM", "alibart"}; }

} // namespace sfwm::config
