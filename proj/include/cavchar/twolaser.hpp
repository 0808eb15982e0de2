#ifndef CAVCHAR_TWOLASER_HPP
#define CAVCHAR_TWOLASER_HPP

#include <string>

#include "cavchar/geometry.hpp"
#include "cavchar/quantity.hpp"

namespace cavchar::twolaser {

// Wavelength-meter resolution assumed for a laser line that carries no
// explicit sigma.
inline constexpr double kDefaultWlmSigmaHz = 10e6;

// One laser parked on one cavity resonance. The offsets index the resonance
// relative to the reference line's mode: the geometry measurement uses the
// reference TEM00 (0, 0), the adjacent TEM00 (1, 0) and the adjacent
// TEM10 (1, 1).
struct LaserLine {
    std::string label;
    Quantity frequency;          // Hz, absolute optical frequency
    int longitudinal_offset = 0; // axial index relative to the reference mode
    int transverse_order = 0;    // 0 = TEM00, 1 = TEM10/TEM01
};

LaserLine make_line(std::string label, double frequency_hz, int longitudinal_offset,
                    int transverse_order, double sigma_hz = kDefaultWlmSigmaHz);

// A simultaneous two-laser reading: the reference stays on its TEM00 mode
// while the probe addresses a neighbouring resonance.
struct ModePairing {
    LaserLine reference; // longitudinal_offset 0, transverse_order 0
    LaserLine probe;
};

// nu_fsr = probe - reference for a probe on the adjacent TEM00 (1, 0).
// Identical frequencies or a probe below the reference signal a misassigned
// pairing and raise invalid_input.
Quantity reduce_fsr(const ModePairing& pairing,
                    PropagationMode mode = PropagationMode::quadrature);

// nu_trans = (probe - reference) - nu_fsr for a probe on the adjacent
// TEM10 (1, 1). A result outside (0, nu_fsr) means the transverse order was
// misassigned (equality with zero: the probe actually sat on the TEM00).
//
// Quadrature sigma is hypot(probe.sigma, reference.sigma), not a four-reading
// sum: the reference reading is shared with the fsr pairing and cancels,
// leaving nu_trans = nu_10 - nu_00, two independent readings.
Quantity reduce_trans(const ModePairing& pairing, const Quantity& fsr,
                      PropagationMode mode = PropagationMode::quadrature);

// Full geometry from the two measured spacings, every sigma propagated
// end-to-end from (fsr, trans, lambda) as independent inputs.
geometry::CavityGeometry solve_geometry(const Quantity& fsr, const Quantity& trans,
                                        const Quantity& wavelength);

} // namespace cavchar::twolaser

#endif
