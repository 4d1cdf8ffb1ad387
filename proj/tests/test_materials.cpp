#include "sfwm/error.hpp"
#include "sfwm/materials.hpp"

#include <doctest.h>

#include <cmath>

using namespace sfwm;
using namespace sfwm::materials;

TEST_CASE("silica follows the Malitson reference values") {
    const auto m = silica();
    // Published Malitson indices at 0.5876 um (the d line) and 1.55 um.
    CHECK(m->refractive_index(0.5875618) == doctest::Approx(1.458464).epsilon(2e-6));
    CHECK(m->refractive_index(1.55) == doctest::Approx(1.444024).epsilon(2e-6));
}

TEST_CASE("silicon index in the telecom and mid-infrared bands") {
    const auto m = silicon();
    CHECK(m->refractive_index(1.55) == doctest::Approx(3.4757).epsilon(1e-3));
    CHECK(m->refractive_index(3.905) == doctest::Approx(3.4265).epsilon(1e-3));
}

TEST_CASE("closed-form dn/dlambda matches a central difference") {
    for (const auto& m : {silicon(), silica()}) {
        for (double l : {1.5, 2.2, 3.4, 4.0}) {
            const double h = 1e-5;
            const double fd = (m->refractive_index(l + h) - m->refractive_index(l - h)) / (2.0 * h);
            CHECK(m->dindex(l) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("normal dispersion in the transparency windows") {
    // Both materials are normally dispersive between their UV and IR
    // resonances: n decreases monotonically with wavelength.
    for (const auto& [m, lo, hi] : {std::tuple{silica(), 0.5, 1.2}, std::tuple{silicon(), 1.4, 4.2}}) {
        double prev = m->refractive_index(lo);
        for (double l = lo + 0.01; l <= hi; l += 0.01) {
            const double n = m->refractive_index(l);
            CHECK(n < prev);
            CHECK(n > 1.0);
            prev = n;
        }
    }
}

TEST_CASE("evaluation outside the validity range is rejected") {
    CHECK_THROWS_AS(silicon()->refractive_index(1.0), Error);
    try {
        silica()->refractive_index(5.0);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
}

TEST_CASE("PCF cladding mixing rules") {
    const double l = 0.7084;
    const double ns = silica()->refractive_index(l);
    CHECK(pcf_cladding_90(MixingRule::IndexMean)->refractive_index(l) == doctest::Approx(0.9 + 0.1 * ns));
    CHECK(pcf_cladding_90(MixingRule::PermittivityMean)->refractive_index(l) ==
          doctest::Approx(std::sqrt(0.9 + 0.1 * ns * ns)));
}

TEST_CASE("wavelength tables interpolate linearly and clamp") {
    WavelengthTable t({{1.0, 2.0}, {3.0, 6.0}});
    CHECK(t.at(2.0, "t") == doctest::Approx(4.0));
    CHECK(t.at(0.5, "t") == doctest::Approx(2.0));
    CHECK(t.at(9.0, "t") == doctest::Approx(6.0));
    CHECK_THROWS_AS(WavelengthTable({{2.0, 1.0}, {1.0, 1.0}}), Error);
    CHECK_THROWS_AS(WavelengthTable().at(1.0, "empty"), Error);
}

TEST_CASE("nonlinear index and absorption of the built-ins") {
    CHECK(silica()->nonlinear_index(1.55) == doctest::Approx(2.6e-20));
    CHECK(silicon()->nonlinear_index(2.151) > 1e-18);
    CHECK(silicon()->absorption(1.55) == doctest::Approx(0.1));
    CHECK(silicon()->absorption(3.905) == doctest::Approx(0.002));
    CHECK(silica()->absorption(3.461) == doctest::Approx(1.0));
    CHECK(air()->refractive_index(2.0) == 1.0);
}

TEST_CASE("library registry") {
    Library lib;
    for (const char* n : {"silicon", "silica", "air", "pcf_cladding_90"}) {
        CHECK(lib.contains(n));
        CHECK(is_reserved_name(n));
    }
    auto custom = std::make_shared<const MaterialModel>("sin", ConstantIndex{2.0});
    lib.add(custom);
    CHECK(lib.get("sin")->refractive_index(1.0) == 2.0);
    CHECK_THROWS_AS(lib.add(std::make_shared<const MaterialModel>("silica", ConstantIndex{1.5})), Error);
    try {
        lib.get("unobtainium");
        FAIL("expected Config");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
    }
    lib.set_pcf_mixing(MixingRule::PermittivityMean);
    const double ns = silica()->refractive_index(0.8);
    CHECK(lib.get("pcf_cladding_90")->refractive_index(0.8) == doctest::Approx(std::sqrt(0.9 + 0.1 * ns * ns)));
}

TEST_CASE("user Sellmeier material") {
    // One-term model n² = 1 + λ²/(λ² − 0.01): check against the formula.
    SellmeierModel s({{1.0, 0.01}}, 0.5, 2.0);
    MaterialModel m("toy", s);
    const double l = 1.2;
    CHECK(m.refractive_index(l) == doctest::Approx(std::sqrt(1.0 + l * l / (l * l - 0.01))));
    CHECK(m.validity_range().first == 0.5);
    CHECK_THROWS_AS(m.nonlinear_index(1.0), Error);
}
