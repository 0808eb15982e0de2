#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <numbers>

#include "cavchar/coupling.hpp"
#include "cavchar/errors.hpp"
#include "cavchar/geometry.hpp"

using namespace cavchar;
using namespace cavchar::coupling;
using doctest::Approx;

namespace {

constexpr double kC = 299792458.0;

Quantity m(double v, double s = 0.0) { return Quantity::symmetric(v, s, Unit::meter); }
Quantity hz(double v, double s = 0.0) { return Quantity::symmetric(v, s, Unit::hertz); }

const Quantity kLength = m(151.686e-6);
const Quantity kRadius = m(0.1007);

} // namespace

TEST_CASE("rb87_d2 constants") {
    const AtomicLine line = rb87_d2();
    CHECK(line.label == "Rb-87 D2");
    CHECK(line.gamma_over_2pi.value == 3.0325e6);
    CHECK(line.gamma_over_2pi.sigma() == 4.5e3);
    CHECK(line.gamma_over_2pi.unit == Unit::hertz);
    CHECK(line.wavelength.value == 780.245e-9);
    CHECK(line.wavelength.sigma() == 0.0);
    CHECK(line.wavelength.unit == Unit::meter);
}

TEST_CASE("g0_max") {
    SUBCASE("measured cavity") {
        const Quantity g0 = g0_max(kLength, kRadius, rb87_d2());
        CHECK(g0.value == approx_abs(16.0366e6, 1e3));
        CHECK(g0.value == approx_abs(16.04e6, 1e4));
        CHECK(g0.unit == Unit::hertz);
        // only gamma carries uncertainty here: sigma = g0 * sigma_gamma / (2 gamma)
        CHECK(g0.sigma() == Approx(g0.value * 4.5e3 / (2.0 * 3.0325e6)).epsilon(1e-2));
    }
    SUBCASE("closed form") {
        const AtomicLine line = rb87_d2();
        const double expected =
            std::sqrt(3.0 / (2.0 * std::numbers::sqrt2 * std::numbers::pi * std::numbers::pi)) *
            std::sqrt(kC * line.wavelength.value /
                      std::sqrt(kRadius.value * std::pow(kLength.value, 3)) *
                      (line.gamma_over_2pi.value * 2.0 * std::numbers::pi / std::numbers::pi));
        CHECK(g0_max(kLength, kRadius, line).value == Approx(expected).epsilon(1e-12));
    }
    SUBCASE("scaling: g0 ~ L^(-3/4)") {
        const AtomicLine line = rb87_d2();
        const double g1 = g0_max(m(100e-6), kRadius, line).value;
        const double g4 = g0_max(m(400e-6), kRadius, line).value;
        CHECK(g4 / g1 == Approx(std::pow(4.0, -0.75)).epsilon(1e-12));
    }
    SUBCASE("agrees with the mode-volume route") {
        // g0 = sqrt(3 c lambda^2 Gamma / (4 pi V)) with Gamma = 2 gamma (angular)
        const AtomicLine line = rb87_d2();
        const Quantity lam = Quantity::exact(line.wavelength.value, Unit::meter);
        const Quantity waist = geometry::waist(kLength, kRadius, lam);
        const Quantity vol = geometry::mode_volume(waist, kLength);
        const double gamma_ang = 2.0 * std::numbers::pi * line.gamma_over_2pi.value;
        const double oracle =
            std::sqrt(3.0 * kC * line.wavelength.value * line.wavelength.value * gamma_ang /
                      (4.0 * std::numbers::pi * vol.value)) /
            (2.0 * std::numbers::pi);
        const double got = g0_max(kLength, kRadius, line).value;
        // the near-planar closed form drops the (1 - L/R ...) envelope corrections
        CHECK(std::abs(got - oracle) / oracle <= 5e-3);
        CHECK(std::abs(got - oracle) / oracle == Approx(1.9e-4).epsilon(0.2));
    }
    SUBCASE("monotone in both geometry knobs") {
        const AtomicLine line = rb87_d2();
        double prev = g0_max(m(80e-6), kRadius, line).value;
        for (const double len : {120e-6, 200e-6, 400e-6}) {
            const double cur = g0_max(m(len), kRadius, line).value;
            CHECK(cur < prev);
            prev = cur;
        }
        prev = g0_max(kLength, m(0.06), line).value;
        for (const double rad : {0.1, 0.2, 0.4}) {
            const double cur = g0_max(kLength, m(rad), line).value;
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("errors") {
        const AtomicLine line = rb87_d2();
        CHECK_THROWS_AS(g0_max(m(0.0), kRadius, line), invalid_input);
        CHECK_THROWS_AS(g0_max(kLength, m(0.0), line), invalid_input);
        CHECK_THROWS_AS(g0_max(m(0.3), m(0.1), line), invalid_input); // unstable, L >= 2R
        AtomicLine bad = line;
        bad.gamma_over_2pi = hz(0.0);
        CHECK_THROWS_AS(g0_max(kLength, kRadius, bad), invalid_input);
        bad = line;
        bad.wavelength = Quantity::exact(780e-9, Unit::hertz);
        CHECK_THROWS_AS(g0_max(kLength, kRadius, bad), invalid_input);
    }
}

TEST_CASE("strong_coupling") {
    SUBCASE("measured operating point") {
        const auto r = strong_coupling(hz(16.04e6, 0.01e6), hz(18.55e6, 0.45e6), rb87_d2());
        CHECK(r.margin == approx_abs(4.57, 5e-3));
        CHECK(r.strong);
        CHECK(r.g0_over_2pi.value == 16.04e6);
        CHECK(r.kappa_over_2pi.value == 18.55e6);
        CHECK(r.gamma_over_2pi.value == 3.0325e6);
    }
    SUBCASE("boundary: g0^2 = kappa gamma") {
        const AtomicLine line = rb87_d2();
        const double kappa = 12.0e6;
        const double g0 = std::sqrt(kappa * line.gamma_over_2pi.value);
        const auto r = strong_coupling(hz(g0), hz(kappa), line);
        CHECK(r.margin == Approx(1.0).epsilon(1e-12));
        CHECK_FALSE(r.strong);
    }
    SUBCASE("frequency convention cancels") {
        const AtomicLine line = rb87_d2();
        AtomicLine angular = line;
        angular.gamma_over_2pi = hz(line.gamma_over_2pi.value * 2.0 * std::numbers::pi,
                                    line.gamma_over_2pi.sigma() * 2.0 * std::numbers::pi);
        const double two_pi = 2.0 * std::numbers::pi;
        const auto a = strong_coupling(hz(16.04e6), hz(18.55e6), line);
        const auto b = strong_coupling(hz(16.04e6 * two_pi), hz(18.55e6 * two_pi), angular);
        CHECK(b.margin == Approx(a.margin).epsilon(1e-12));
    }
    SUBCASE("errors") {
        const AtomicLine line = rb87_d2();
        CHECK_THROWS_AS(strong_coupling(hz(0.0), hz(18.55e6), line), invalid_input);
        CHECK_THROWS_AS(strong_coupling(hz(16.04e6), hz(0.0), line), invalid_input);
        CHECK_THROWS_AS(strong_coupling(Quantity::exact(16.04e6, Unit::meter), hz(18.55e6), line),
                        invalid_input);
    }
}
