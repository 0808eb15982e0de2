#include "cavchar/geometry.hpp"

#include "cavchar/errors.hpp"

namespace cavchar::geometry {

namespace {

void require_positive(const Quantity& q, const char* what) {
    if (!(q.value > 0.0)) {
        throw invalid_input(std::string(what) + " must be positive");
    }
}

void require_stable(const Quantity& length, const Quantity& radius) {
    require_positive(length, "cavity length");
    require_positive(radius, "mirror radius");
    if (!(length.value < 2.0 * radius.value)) {
        throw invalid_input("unstable geometry: cavity length must satisfy 0 < L < 2R");
    }
}

} // namespace

Quantity length_from_fsr(const Quantity& fsr) {
    require_unit(fsr, Unit::hertz, "fsr");
    require_positive(fsr, "fsr");
    const Quantity in[] = {fsr};
    return propagate([](std::span<const double> x) { return length_from_fsr_value(x[0]); },
                     in, Unit::meter);
}

Quantity fsr_from_length(const Quantity& length) {
    require_unit(length, Unit::meter, "cavity length");
    require_positive(length, "cavity length");
    const Quantity in[] = {length};
    return propagate([](std::span<const double> x) { return fsr_from_length_value(x[0]); },
                     in, Unit::hertz);
}

Quantity gouy_from_geometry(const Quantity& length, const Quantity& radius) {
    require_unit(length, Unit::meter, "cavity length");
    require_unit(radius, Unit::meter, "mirror radius");
    require_stable(length, radius);
    const Quantity in[] = {length, radius};
    return propagate([](std::span<const double> x) { return gouy_value(x[0], x[1]); },
                     in, Unit::radian);
}

Quantity radius_from_gouy(const Quantity& gouy, const Quantity& length) {
    require_unit(gouy, Unit::radian, "gouy phase");
    require_unit(length, Unit::meter, "cavity length");
    require_positive(length, "cavity length");
    if (!(gouy.value > 0.0 && gouy.value < std::numbers::pi)) {
        throw invalid_input("gouy phase must lie in (0, pi)");
    }
    const Quantity in[] = {gouy, length};
    return propagate([](std::span<const double> x) { return radius_from_gouy_value(x[0], x[1]); },
                     in, Unit::meter);
}

Quantity trans_spacing_from_gouy(const Quantity& gouy, const Quantity& fsr) {
    require_unit(gouy, Unit::radian, "gouy phase");
    require_unit(fsr, Unit::hertz, "fsr");
    require_positive(fsr, "fsr");
    if (!(gouy.value > 0.0 && gouy.value < std::numbers::pi)) {
        throw invalid_input("gouy phase must lie in (0, pi)");
    }
    const Quantity in[] = {gouy, fsr};
    return propagate([](std::span<const double> x) { return trans_from_gouy_value(x[0], x[1]); },
                     in, Unit::hertz);
}

Quantity gouy_from_trans(const Quantity& trans, const Quantity& fsr) {
    require_unit(trans, Unit::hertz, "transverse spacing");
    require_unit(fsr, Unit::hertz, "fsr");
    require_positive(fsr, "fsr");
    if (!(trans.value > 0.0 && trans.value < fsr.value)) {
        throw invalid_input("transverse spacing must lie strictly between 0 and the fsr");
    }
    const Quantity in[] = {trans, fsr};
    return propagate([](std::span<const double> x) { return gouy_from_trans_value(x[0], x[1]); },
                     in, Unit::radian);
}

Quantity waist(const Quantity& length, const Quantity& radius, const Quantity& wavelength) {
    require_unit(length, Unit::meter, "cavity length");
    require_unit(radius, Unit::meter, "mirror radius");
    require_unit(wavelength, Unit::meter, "wavelength");
    require_stable(length, radius);
    require_positive(wavelength, "wavelength");
    const Quantity in[] = {length, radius, wavelength};
    return propagate([](std::span<const double> x) { return waist_value(x[0], x[1], x[2]); },
                     in, Unit::meter);
}

Quantity rayleigh(const Quantity& waist, const Quantity& wavelength) {
    require_unit(waist, Unit::meter, "waist");
    require_unit(wavelength, Unit::meter, "wavelength");
    require_positive(waist, "waist");
    require_positive(wavelength, "wavelength");
    const Quantity in[] = {waist, wavelength};
    return propagate([](std::span<const double> x) { return rayleigh_value(x[0], x[1]); },
                     in, Unit::meter);
}

Quantity mode_volume(const Quantity& waist, const Quantity& length) {
    require_unit(waist, Unit::meter, "waist");
    require_unit(length, Unit::meter, "cavity length");
    require_positive(waist, "waist");
    require_positive(length, "cavity length");
    const Quantity in[] = {waist, length};
    return propagate([](std::span<const double> x) { return mode_volume_value(x[0], x[1]); },
                     in, Unit::meter3);
}

Quantity mode_frequency(int longitudinal_index, int transverse_order,
                        const Quantity& fsr, const Quantity& gouy) {
    require_unit(fsr, Unit::hertz, "fsr");
    require_unit(gouy, Unit::radian, "gouy phase");
    require_positive(fsr, "fsr");
    if (transverse_order < 0) {
        throw invalid_input("transverse order must be non-negative");
    }
    const double n = static_cast<double>(longitudinal_index);
    const double m = static_cast<double>(transverse_order);
    const Quantity in[] = {fsr, gouy};
    return propagate(
        [n, m](std::span<const double> x) {
            return (n + m * x[1] / std::numbers::pi) * x[0];
        },
        in, Unit::hertz);
}

} // namespace cavchar::geometry
