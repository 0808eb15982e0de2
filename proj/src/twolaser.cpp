#include "cavchar/twolaser.hpp"

#include <cmath>
#include <utility>

#include "cavchar/errors.hpp"

namespace cavchar::twolaser {

using geometry::CavityGeometry;

namespace {

void validate_line(const LaserLine& line) {
    require_unit(line.frequency, Unit::hertz, "laser frequency");
    if (!(line.frequency.value > 0.0)) {
        throw invalid_input("laser line '" + line.label + "' has a non-positive frequency");
    }
    if (line.transverse_order < 0) {
        throw invalid_input("laser line '" + line.label + "' has a negative transverse order");
    }
    line.frequency.sigma(); // asymmetric readings are not a thing
}

void require_assignment(const LaserLine& line, int offset, int order, const char* role) {
    if (line.longitudinal_offset != offset || line.transverse_order != order) {
        throw invalid_input(std::string(role) + " must sit on mode (offset " +
                            std::to_string(offset) + ", order " + std::to_string(order) +
                            "); line '" + line.label + "' is assigned (" +
                            std::to_string(line.longitudinal_offset) + ", " +
                            std::to_string(line.transverse_order) + ")");
    }
}

// Both reduce ops form a difference of two wavelength-meter readings, so
// they share the sigma rule.
double difference_sigma(const LaserLine& a, const LaserLine& b, PropagationMode mode) {
    return mode == PropagationMode::quadrature
               ? std::hypot(a.frequency.sigma(), b.frequency.sigma())
               : std::max(a.frequency.sigma(), b.frequency.sigma());
}

} // namespace

LaserLine make_line(std::string label, double frequency_hz, int longitudinal_offset,
                    int transverse_order, double sigma_hz) {
    LaserLine line{std::move(label),
                   Quantity::symmetric(frequency_hz, sigma_hz, Unit::hertz),
                   longitudinal_offset, transverse_order};
    validate_line(line);
    return line;
}

Quantity reduce_fsr(const ModePairing& pairing, PropagationMode mode) {
    validate_line(pairing.reference);
    validate_line(pairing.probe);
    require_assignment(pairing.reference, 0, 0, "reference line");
    require_assignment(pairing.probe, 1, 0, "fsr probe");

    const double value = pairing.probe.frequency.value - pairing.reference.frequency.value;
    if (value == 0.0) {
        throw invalid_input("probe and reference frequencies are identical; "
                            "the probe did not reach the adjacent mode");
    }
    if (value < 0.0) {
        throw invalid_input("probe frequency lies below the reference; "
                            "longitudinal offsets are misassigned");
    }
    return Quantity::symmetric(value, difference_sigma(pairing.probe, pairing.reference, mode),
                               Unit::hertz);
}

Quantity reduce_trans(const ModePairing& pairing, const Quantity& fsr, PropagationMode mode) {
    validate_line(pairing.reference);
    validate_line(pairing.probe);
    require_assignment(pairing.reference, 0, 0, "reference line");
    require_assignment(pairing.probe, 1, 1, "transverse probe");
    require_unit(fsr, Unit::hertz, "fsr");
    if (!(fsr.value > 0.0)) {
        throw invalid_input("fsr must be positive");
    }

    const double separation = pairing.probe.frequency.value - pairing.reference.frequency.value;
    const double value = separation - fsr.value;
    if (value == 0.0) {
        throw invalid_input("probe-reference separation equals the fsr; "
                            "the probe sat on a TEM00, not the transverse mode");
    }
    if (value < 0.0 || value > fsr.value) {
        throw invalid_input("transverse spacing falls outside (0, fsr); "
                            "check the transverse order assignment");
    }
    // The fsr subtraction adds no reading noise: its reference reading is the
    // same one as in this pairing and cancels (nu_trans = nu_10 - nu_00).
    return Quantity::symmetric(value, difference_sigma(pairing.probe, pairing.reference, mode),
                               Unit::hertz);
}

CavityGeometry solve_geometry(const Quantity& fsr, const Quantity& trans,
                              const Quantity& wavelength) {
    require_unit(fsr, Unit::hertz, "fsr");
    require_unit(trans, Unit::hertz, "transverse spacing");
    require_unit(wavelength, Unit::meter, "wavelength");
    if (!(fsr.value > 0.0)) {
        throw invalid_input("fsr must be positive");
    }
    if (!(trans.value > 0.0 && trans.value < fsr.value)) {
        throw invalid_input("transverse spacing must lie strictly between 0 and the fsr");
    }
    if (!(wavelength.value > 0.0)) {
        throw invalid_input("wavelength must be positive");
    }

    // Every output is a closed-form function of the three independent inputs,
    // so each field's sigma comes from one propagate() call end-to-end rather
    // than from chaining intermediate quantities.
    namespace geo = geometry;
    const Quantity in[] = {fsr, trans, wavelength};
    const auto length_of = [](std::span<const double> x) {
        return geo::length_from_fsr_value(x[0]);
    };
    const auto gouy_of = [](std::span<const double> x) {
        return geo::gouy_from_trans_value(x[1], x[0]);
    };
    const auto radius_of = [&](std::span<const double> x) {
        return geo::radius_from_gouy_value(gouy_of(x), length_of(x));
    };
    const auto waist_of = [&](std::span<const double> x) {
        return geo::waist_value(length_of(x), radius_of(x), x[2]);
    };

    CavityGeometry g;
    g.fsr = fsr;
    g.length = propagate(length_of, in, Unit::meter);
    g.gouy = propagate(gouy_of, in, Unit::radian);
    g.radius = propagate(radius_of, in, Unit::meter);
    g.waist = propagate(waist_of, in, Unit::meter);
    g.rayleigh = propagate(
        [&](std::span<const double> x) { return geo::rayleigh_value(waist_of(x), x[2]); },
        in, Unit::meter);
    g.mode_volume = propagate(
        [&](std::span<const double> x) { return geo::mode_volume_value(waist_of(x), length_of(x)); },
        in, Unit::meter3);
    g.wavelength = wavelength;
    return g;
}

} // namespace cavchar::twolaser
