#ifndef CAVCHAR_COUPLING_HPP
#define CAVCHAR_COUPLING_HPP

#include <string>

#include "cavchar/quantity.hpp"

namespace cavchar::coupling {

// gamma_over_2pi is the atomic polarization decay rate divided by 2 pi, i.e.
// half the natural linewidth.
struct AtomicLine {
    std::string label;
    Quantity gamma_over_2pi; // Hz
    Quantity wavelength;     // m
};

// Rb-87 D2: 2 gamma = 2 pi * 6.065(9) MHz at 780.245 nm.
AtomicLine rb87_d2();

// Maximum atom-cavity coupling for an atom at a field antinode on axis,
// near-planar limit L << R:
//   g0/2pi = sqrt(3 / (2 sqrt(2) pi^2)) * sqrt(c lambda / sqrt(R L^3) * gamma/pi)
Quantity g0_max(const Quantity& length, const Quantity& radius, const AtomicLine& line);

struct CouplingResult {
    Quantity g0_over_2pi;    // Hz
    Quantity kappa_over_2pi; // Hz
    Quantity gamma_over_2pi; // Hz
    double margin = 0.0;     // g0^2 / (kappa gamma); unit convention cancels
    bool strong = false;     // margin > 1
};

CouplingResult strong_coupling(const Quantity& g0_over_2pi,
                               const Quantity& kappa_over_2pi,
                               const AtomicLine& line);

} // namespace cavchar::coupling

#endif
