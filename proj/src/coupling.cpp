#include "cavchar/coupling.hpp"

#include <cmath>
#include <numbers>

#include "cavchar/errors.hpp"
#include "cavchar/geometry.hpp"

namespace cavchar::coupling {

namespace {

void validate_line(const AtomicLine& line) {
    require_unit(line.gamma_over_2pi, Unit::hertz, "gamma/2pi");
    require_unit(line.wavelength, Unit::meter, "atomic wavelength");
    if (!(line.gamma_over_2pi.value > 0.0)) {
        throw invalid_input("atomic decay rate must be positive");
    }
    if (!(line.wavelength.value > 0.0)) {
        throw invalid_input("atomic wavelength must be positive");
    }
}

} // namespace

AtomicLine rb87_d2() {
    return AtomicLine{
        "Rb-87 D2",
        Quantity::symmetric(3.0325e6, 4.5e3, Unit::hertz), // half of 6.065(9) MHz
        Quantity::exact(780.245e-9, Unit::meter),
    };
}

Quantity g0_max(const Quantity& length, const Quantity& radius, const AtomicLine& line) {
    require_unit(length, Unit::meter, "cavity length");
    require_unit(radius, Unit::meter, "mirror radius");
    validate_line(line);
    if (!(length.value > 0.0 && length.value < 2.0 * radius.value)) {
        throw invalid_input("unstable geometry: cavity length must satisfy 0 < L < 2R");
    }

    const Quantity in[] = {length, radius, line.gamma_over_2pi, line.wavelength};
    return propagate(
        [](std::span<const double> x) {
            const double length_m = x[0];
            const double radius_m = x[1];
            const double gamma_over_pi = 2.0 * x[2]; // gamma/pi in Hz
            const double lambda = x[3];
            const double pi2 = std::numbers::pi * std::numbers::pi;
            const double prefactor = std::sqrt(3.0 / (2.0 * std::numbers::sqrt2 * pi2));
            const double geometric = geometry::kSpeedOfLight * lambda /
                                     std::sqrt(radius_m * length_m * length_m * length_m);
            return prefactor * std::sqrt(geometric * gamma_over_pi);
        },
        in, Unit::hertz);
}

CouplingResult strong_coupling(const Quantity& g0_over_2pi,
                               const Quantity& kappa_over_2pi,
                               const AtomicLine& line) {
    require_unit(g0_over_2pi, Unit::hertz, "g0/2pi");
    require_unit(kappa_over_2pi, Unit::hertz, "kappa/2pi");
    validate_line(line);
    if (!(g0_over_2pi.value > 0.0)) {
        throw invalid_input("g0 must be positive");
    }
    if (!(kappa_over_2pi.value > 0.0)) {
        throw invalid_input("kappa must be positive");
    }

    CouplingResult result;
    result.g0_over_2pi = g0_over_2pi;
    result.kappa_over_2pi = kappa_over_2pi;
    result.gamma_over_2pi = line.gamma_over_2pi;
    // The 2pi normalization cancels between numerator and denominator.
    result.margin = g0_over_2pi.value * g0_over_2pi.value /
                    (kappa_over_2pi.value * line.gamma_over_2pi.value);
    result.strong = result.margin > 1.0;
    return result;
}

} // namespace cavchar::coupling
