#include "sfwm/config.hpp"
#include "sfwm/error.hpp"

#include <doctest.h>

#include <string>

using namespace sfwm;
using namespace sfwm::config;

namespace {

std::string config_error(std::string_view text) {
    try {
        parse(text, "t.ini").validate();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        return e.what();
    }
    return {};
}

constexpr const char* kMinimal = R"([geometry]
width = 2 um
height = 0.7 um
[pump]
wavelength = 2.2 um
duration = 5 ps
peak_power = 30 mW
rep_rate = 80 MHz
)";

} // namespace

TEST_CASE("quantities convert to canonical units") {
    CHECK(parse_quantity("2.05 um", Dim::Length) == doctest::Approx(2.05));
    CHECK(parse_quantity("2050nm", Dim::Length) == doctest::Approx(2.05));
    CHECK(parse_quantity("2 cm", Dim::Length) == doctest::Approx(2e4));
    CHECK(parse_quantity("1.5 \xC2\xB5m", Dim::Length) == doctest::Approx(1.5));
    CHECK(parse_quantity("5 ps", Dim::Time) == doctest::Approx(5e-12));
    CHECK(parse_quantity("960 uW", Dim::Power) == doctest::Approx(9.6e-4));
    CHECK(parse_quantity("24.1 mW", Dim::Power) == doctest::Approx(0.0241));
    CHECK(parse_quantity("80 MHz", Dim::Frequency) == doctest::Approx(8e7));
    CHECK(parse_quantity("2 dB/m", Dim::Attenuation) == doctest::Approx(0.02));
    CHECK(parse_quantity("1e-18 m2/W", Dim::NonlinearIndex) == doctest::Approx(1e-18));
    CHECK(parse_quantity("0.5", Dim::None) == 0.5);
}

TEST_CASE("unitless or mismatched quantities are rejected") {
    for (auto [text, dim] : {std::pair{"2.05", Dim::Length}, std::pair{"5 ps", Dim::Length},
                             std::pair{"2 furlongs", Dim::Length}, std::pair{"mW", Dim::Power},
                             std::pair{"3 um", Dim::None}}) {
        try {
            parse_quantity(text, dim);
            FAIL("accepted " << text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Config);
        }
    }
}

TEST_CASE("filters accept wavelength or frequency") {
    CHECK(parse_spectral("1 THz") == Spectral{true, 1e12});
    CHECK(parse_spectral("570 nm") == Spectral{false, 0.57});
    CHECK_THROWS_AS(parse_spectral("3 ps"), Error);
}

TEST_CASE("presets validate and round-trip through text exactly") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto cfg = preset(name);
        CHECK_NOTHROW(cfg.validate());
        CHECK(cfg.name == name);
        const auto text = serialize(cfg);
        const auto back = parse(text);
        CHECK(back == cfg);
        CHECK(serialize(back) == text);
    }
    CHECK(preset_names().size() == 4);
    CHECK_THROWS_AS(preset("wXYZ"), Error);
}

TEST_CASE("preset contents") {
    const auto c = preset("wCOM");
    REQUIRE(c.geometry);
    CHECK(c.geometry->width_um == doctest::Approx(2.35));
    CHECK(c.geometry->height_um == doctest::Approx(0.65));
    CHECK(c.peak_power_w() == doctest::Approx(0.0322));
    CHECK(c.pulse().duration_s == doctest::Approx(5e-12));
    CHECK(c.design.target_signal_um == doctest::Approx(3.905));
    const auto a = preset("alibart");
    REQUIRE(a.fiber);
    CHECK_FALSE(a.geometry);
    CHECK(a.fiber->core_radius_um == doctest::Approx(0.965));
    // Peak power follows from the mean power, rate and duration.
    CHECK(a.peak_power_w() == doctest::Approx(peak_power_from_mean(960e-6, 80e6, 2e-12)));
    CHECK(a.chain.mu_s == 0.58);
}

TEST_CASE("custom materials round-trip and enter the library") {
    std::string text = kMinimal;
    text += R"([material toy]
sellmeier_b = 1.0, 0.5
sellmeier_c = 0.01 um2, 100 um2
valid_min = 1 um
valid_max = 5 um
n2 = 2e-19 m2/W
absorption = 0.5 dB/cm
[material flat]
index = 1.9
valid_min = 0.5 um
valid_max = 6 um
)";
    const auto cfg = parse(text);
    cfg.validate();
    REQUIRE(cfg.materials.size() == 2);
    CHECK(cfg.materials[0].sellmeier.size() == 2);
    CHECK(cfg.materials[0].sellmeier[1].c_um2 == 100.0);
    CHECK(parse(serialize(cfg)) == cfg);

    const auto lib = cfg.library();
    const double l = 2.0;
    const double expect = std::sqrt(1.0 + l * l / (l * l - 0.01) + 0.5 * l * l / (l * l - 100.0));
    CHECK(lib.get("toy")->refractive_index(l) == doctest::Approx(expect));
    CHECK(lib.get("toy")->nonlinear_index(l) == doctest::Approx(2e-19));
    CHECK(lib.get("toy")->absorption(l) == doctest::Approx(0.5));
    CHECK(lib.get("flat")->refractive_index(3.0) == 1.9);
    CHECK(lib.contains("silicon"));
}

TEST_CASE("inconsistent configurations report the offending line") {
    CHECK(config_error("[pump]\nwavelength = 2 um\nwavelength = 3 um\n").find("t.ini:3:") != std::string::npos);
    CHECK(config_error("[pump]\ncolour = red\n").find("t.ini:2: unknown key") != std::string::npos);
    CHECK(config_error("[pump]\n[weather]\n").find("t.ini:2: unknown section") != std::string::npos);
    CHECK(config_error("[pump]\n[pump]\n").find("t.ini:2:") != std::string::npos);
    CHECK(config_error("width = 2 um\n").find("t.ini:1:") != std::string::npos);
    CHECK(config_error("[geometry]\nwidth = 2\n").find("t.ini:2:") != std::string::npos);
    CHECK(config_error(std::string(kMinimal) + "[material silicon]\nindex = 2\n").find("reserved") !=
          std::string::npos);
}

TEST_CASE("section consistency rules") {
    const std::string fiber = "[fiber]\ncore_radius = 1 um\n";
    std::string both = std::string(kMinimal) + fiber;
    CHECK(config_error(both).find("exactly one of [geometry] and [fiber]") != std::string::npos);

    std::string neither = "[pump]\nwavelength = 2.2 um\nduration = 5 ps\npeak_power = 1 W\n";
    CHECK(config_error(neither).find("exactly one of [geometry] and [fiber]") != std::string::npos);

    std::string two_powers = std::string(kMinimal) + "mean_power = 1 mW\n";
    CHECK(config_error(two_powers).find("peak_power and mean_power") != std::string::npos);

    std::string bad_eff = std::string(kMinimal) + "[detection]\nmu_s = 1.5\n";
    CHECK(config_error(bad_eff).find("efficiencies") != std::string::npos);

    std::string no_model = std::string(kMinimal) + "[material foo]\nvalid_min = 1 um\nvalid_max = 2 um\n";
    CHECK(config_error(no_model).find("needs either index or sellmeier") != std::string::npos);

    CHECK(config_error(kMinimal).empty());
}
