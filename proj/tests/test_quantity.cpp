#include <doctest.h>

#include <cmath>
#include <random>

#include "cavchar/errors.hpp"
#include "cavchar/quantity.hpp"

using namespace cavchar;
using doctest::Approx;

TEST_CASE("unit names round-trip") {
    for (Unit u : {Unit::hertz, Unit::meter, Unit::meter2, Unit::meter3, Unit::radian,
                   Unit::dimensionless, Unit::volt, Unit::ppm, Unit::second}) {
        CHECK(unit_from_name(unit_name(u)) == u);
    }
    CHECK(unit_name(Unit::hertz) == "Hz");
    CHECK(unit_name(Unit::ppm) == "ppm");
    CHECK_THROWS_AS(unit_from_name("furlong"), invalid_input);
}

TEST_CASE("propagation mode names round-trip") {
    CHECK(propagation_mode_from_name("quadrature") == PropagationMode::quadrature);
    CHECK(propagation_mode_from_name("resolution") == PropagationMode::resolution);
    CHECK(propagation_mode_name(PropagationMode::resolution) == "resolution");
    CHECK_THROWS_AS(propagation_mode_from_name("vibes"), invalid_input);
}

TEST_CASE("factories enforce sigma invariants") {
    const Quantity q = Quantity::symmetric(5.0, 1.0, Unit::hertz);
    CHECK(q.value == 5.0);
    CHECK(q.sigma() == 1.0);
    CHECK(q.symmetric_sigma());

    CHECK(Quantity::exact(2.0, Unit::meter).sigma() == 0.0);
    CHECK_THROWS_AS(Quantity::symmetric(1.0, -0.1, Unit::hertz), invalid_input);
    CHECK_THROWS_AS(Quantity::asymmetric(1.0, -0.1, 0.1, Unit::hertz), invalid_input);
    CHECK_THROWS_AS(Quantity::asymmetric(1.0, 0.1, -0.1, Unit::hertz), invalid_input);

    const Quantity a = Quantity::asymmetric(0.99, 0.03, 0.01, Unit::dimensionless);
    CHECK_FALSE(a.symmetric_sigma());
    CHECK_THROWS_AS(a.sigma(), invalid_input);
}

TEST_CASE("subtract: adjacent-mode frequency differences") {
    const Quantity probe = Quantity::symmetric(384.22777e12, 10e6, Unit::hertz);
    const Quantity reference = Quantity::symmetric(383.23957e12, 10e6, Unit::hertz);

    SUBCASE("quadrature") {
        const Quantity fsr = subtract(probe, reference);
        CHECK(fsr.value == Approx(0.98820e12).epsilon(1e-12));
        CHECK(fsr.sigma() == Approx(10e6 * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(fsr.unit == Unit::hertz);
    }
    SUBCASE("resolution keeps the dominant instrument width") {
        const Quantity other = Quantity::symmetric(383.23957e12, 8e6, Unit::hertz);
        const Quantity fsr = subtract(probe, other, PropagationMode::resolution);
        CHECK(fsr.sigma() == 10e6);
    }
    SUBCASE("anticommutative value, symmetric sigma") {
        const Quantity d1 = subtract(probe, reference);
        const Quantity d2 = subtract(reference, probe);
        CHECK(d1.value == -d2.value);
        CHECK(d1.sigma() == d2.sigma());
    }
    SUBCASE("x - x is zero with sigma sqrt(2) x.sigma") {
        const Quantity d = subtract(probe, probe);
        CHECK(d.value == 0.0);
        CHECK(d.sigma() == Approx(10e6 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("transverse-splitting arithmetic") {
        const Quantity sep = Quantity::symmetric(1.00547e12, 14.142e6, Unit::hertz);
        const Quantity fsr = Quantity::symmetric(0.98820e12, 14.142e6, Unit::hertz);
        CHECK(subtract(sep, fsr).value == Approx(17.270e9).epsilon(1e-9));
    }
}

TEST_CASE("subtract rejects bad inputs") {
    const Quantity hz = Quantity::symmetric(1.0, 0.1, Unit::hertz);
    const Quantity m = Quantity::symmetric(1.0, 0.1, Unit::meter);
    CHECK_THROWS_AS(subtract(hz, m), invalid_input);

    const Quantity asym = Quantity::asymmetric(1.0, 0.2, 0.1, Unit::hertz);
    CHECK_THROWS_AS(subtract(asym, hz), invalid_input);
    CHECK_THROWS_AS(subtract(hz, asym), invalid_input);
}

TEST_CASE("propagate: identity and analytic references") {
    SUBCASE("identity") {
        const Quantity in[] = {Quantity::symmetric(5.0, 1.0, Unit::meter)};
        const Quantity out = propagate(
            [](std::span<const double> x) { return x[0]; }, in, Unit::meter);
        CHECK(out.value == 5.0);
        CHECK(out.sigma() == Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("length from fsr matches the analytic partial") {
        const double c = 299792458.0;
        const double nu = 0.98820e12;
        const double s = 14.142135e6;
        const Quantity in[] = {Quantity::symmetric(nu, s, Unit::hertz)};
        const Quantity out = propagate(
            [c](std::span<const double> x) { return c / (2.0 * x[0]); }, in, Unit::meter);
        CHECK(out.value == Approx(151.686e-6).epsilon(2e-6));
        CHECK(out.sigma() == Approx(c / (2.0 * nu * nu) * s).epsilon(1e-6)); // ~2.17 nm
    }
    SUBCASE("product rule") {
        const Quantity in[] = {Quantity::symmetric(2.0, 0.1, Unit::dimensionless),
                               Quantity::symmetric(3.0, 0.1, Unit::dimensionless)};
        const Quantity out = propagate(
            [](std::span<const double> x) { return x[0] * x[1]; }, in,
            Unit::dimensionless);
        CHECK(out.value == Approx(6.0).epsilon(1e-12));
        CHECK(out.sigma() == Approx(std::sqrt(0.13)).epsilon(1e-6));
    }
    SUBCASE("linear functions reproduce exact Gaussian propagation") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> val(-10.0, 10.0);
        std::uniform_real_distribution<double> sig(0.01, 2.0);
        for (int i = 0; i < 50; ++i) {
            const double sa = sig(rng);
            const double sb = sig(rng);
            const Quantity in[] = {Quantity::symmetric(val(rng), sa, Unit::hertz),
                                   Quantity::symmetric(val(rng), sb, Unit::hertz)};
            const Quantity out = propagate(
                [](std::span<const double> x) { return 3.0 * x[0] - 2.0 * x[1] + 7.0; },
                in, Unit::hertz);
            CHECK(out.sigma() ==
                  Approx(std::sqrt(9.0 * sa * sa + 4.0 * sb * sb)).epsilon(1e-6));
        }
    }
}

TEST_CASE("propagate: composition agrees with single-shot to first order") {
    // gouy = pi t / f, then R = L / (2 sin^2(gouy / 2)) with L held fixed.
    const double length = 151.686e-6;
    const Quantity trans = Quantity::symmetric(17.270e9, 14.142e6, Unit::hertz);
    const Quantity fsr = Quantity::symmetric(0.98820e12, 14.142e6, Unit::hertz);

    const Quantity both[] = {trans, fsr};
    const auto pi = 3.14159265358979323846;
    const Quantity direct = propagate(
        [&](std::span<const double> x) {
            const double g = pi * x[0] / x[1];
            const double s = std::sin(0.5 * g);
            return length / (2.0 * s * s);
        },
        both, Unit::meter);

    const Quantity gouy = propagate(
        [&](std::span<const double> x) { return pi * x[0] / x[1]; }, both, Unit::radian);
    const Quantity gq[] = {gouy};
    const Quantity staged = propagate(
        [&](std::span<const double> x) {
            const double s = std::sin(0.5 * x[0]);
            return length / (2.0 * s * s);
        },
        gq, Unit::meter);

    CHECK(staged.value == Approx(direct.value).epsilon(1e-12));
    CHECK(staged.sigma() == Approx(direct.sigma()).epsilon(1e-3));
}

TEST_CASE("propagate: exact inputs stay exact and errors surface") {
    const Quantity in[] = {Quantity::exact(4.0, Unit::meter)};
    const Quantity out = propagate(
        [](std::span<const double> x) { return std::sqrt(x[0]); }, in, Unit::meter);
    CHECK(out.value == 2.0);
    CHECK(out.sigma() == 0.0);

    const Quantity bad[] = {Quantity::symmetric(0.0, 0.1, Unit::dimensionless)};
    CHECK_THROWS_AS(propagate([](std::span<const double> x) { return 1.0 / x[0]; }, bad,
                              Unit::dimensionless),
                    compute_error);
    const Quantity neg[] = {Quantity::symmetric(-1.0, 0.1, Unit::dimensionless)};
    CHECK_THROWS_AS(propagate([](std::span<const double> x) { return std::sqrt(x[0]); },
                              neg, Unit::dimensionless),
                    compute_error);

    const Quantity asym[] = {Quantity::asymmetric(1.0, 0.2, 0.1, Unit::dimensionless)};
    CHECK_THROWS_AS(propagate([](std::span<const double> x) { return x[0]; }, asym,
                              Unit::dimensionless),
                    invalid_input);
}

TEST_CASE("require_unit") {
    const Quantity q = Quantity::symmetric(1.0, 0.1, Unit::hertz);
    CHECK_NOTHROW(require_unit(q, Unit::hertz, "q"));
    CHECK_THROWS_AS(require_unit(q, Unit::meter, "q"), invalid_input);
}
