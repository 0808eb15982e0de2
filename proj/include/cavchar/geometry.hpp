#ifndef CAVCHAR_GEOMETRY_HPP
#define CAVCHAR_GEOMETRY_HPP

#include <cmath>
#include <numbers>

#include "cavchar/quantity.hpp"

namespace cavchar::geometry {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact

// Scalar cores of the symmetric-cavity formulas (two mirrors, equal radius R,
// separation L, stable for 0 < L < 2R). The Quantity wrappers below and the
// end-to-end solver in twolaser propagate uncertainties through these.
inline double length_from_fsr_value(double fsr) {
    return kSpeedOfLight / (2.0 * fsr);
}
inline double fsr_from_length_value(double length) {
    return kSpeedOfLight / (2.0 * length);
}
inline double gouy_value(double length, double radius) {
    return 2.0 * std::atan(std::sqrt(length / (2.0 * radius - length)));
}
inline double radius_from_gouy_value(double gouy, double length) {
    const double s = std::sin(0.5 * gouy);
    return length / (2.0 * s * s);
}
inline double trans_from_gouy_value(double gouy, double fsr) {
    return gouy * fsr / std::numbers::pi;
}
inline double gouy_from_trans_value(double trans, double fsr) {
    return std::numbers::pi * trans / fsr;
}
inline double waist_value(double length, double radius, double lambda) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return std::pow(length * (2.0 * radius - length) * lambda * lambda / (4.0 * pi2), 0.25);
}
inline double rayleigh_value(double waist, double lambda) {
    return std::numbers::pi * waist * waist / lambda;
}
inline double mode_volume_value(double waist, double length) {
    return std::numbers::pi * waist * waist * length / 4.0;
}

// Everything the two-laser measurement pins down, with propagated sigmas.
struct CavityGeometry {
    Quantity fsr;         // Hz, free spectral range c/(2L)
    Quantity length;      // m
    Quantity gouy;        // rad, round-trip transverse mode spacing phase
    Quantity radius;      // m, common mirror radius of curvature
    Quantity waist;       // m, TEM00 1/e^2 intensity radius at the center
    Quantity rayleigh;    // m
    Quantity mode_volume; // m^3, pi w0^2 L / 4
    Quantity wavelength;  // m, the lambda the derived quantities refer to
};

// L = c/(2 nu_fsr)
Quantity length_from_fsr(const Quantity& fsr);
// nu_fsr = c/(2L)
Quantity fsr_from_length(const Quantity& length);
// gouy = 2 atan(sqrt(L/(2R - L))), requires stability 0 < L < 2R
Quantity gouy_from_geometry(const Quantity& length, const Quantity& radius);
// R = L / (2 sin^2(gouy/2)), requires 0 < gouy < pi
Quantity radius_from_gouy(const Quantity& gouy, const Quantity& length);
// nu_trans = gouy * nu_fsr / pi
Quantity trans_spacing_from_gouy(const Quantity& gouy, const Quantity& fsr);
// gouy = pi * nu_trans / nu_fsr, requires 0 < nu_trans < nu_fsr
Quantity gouy_from_trans(const Quantity& trans, const Quantity& fsr);
// w0 = (L (2R - L) lambda^2 / (4 pi^2))^(1/4)
Quantity waist(const Quantity& length, const Quantity& radius, const Quantity& wavelength);
// z0 = pi w0^2 / lambda; identical to sqrt(L(2R - L))/2 for a symmetric cavity
Quantity rayleigh(const Quantity& waist, const Quantity& wavelength);
// V_c = pi w0^2 L / 4
Quantity mode_volume(const Quantity& waist, const Quantity& length);

// Resonance ladder relative to an arbitrary global offset:
// nu(n, m) = (n + m * gouy/pi) * nu_fsr. transverse_order is the summed
// Hermite index, so TEM10 and TEM01 are degenerate by construction.
Quantity mode_frequency(int longitudinal_index, int transverse_order,
                        const Quantity& fsr, const Quantity& gouy);

} // namespace cavchar::geometry

#endif
