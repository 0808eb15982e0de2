#ifndef CAVCHAR_BUDGET_HPP
#define CAVCHAR_BUDGET_HPP

#include <vector>

#include "cavchar/quantity.hpp"

namespace cavchar::budget {

// A batch of nominally identical mirrors characterized at one wavelength.
struct MirrorSet {
    std::vector<Quantity> transmittances; // ppm, one entry per mirror
    Quantity wavelength;                  // m; 0 = unspecified
    double systematic_fraction = 0.0;     // calibration systematic, as a fraction
                                          // of the statistical sigma
};

// Mean transmittance. Sigma is the sample standard deviation of the values
// (shot-to-shot scatter dominates per-mirror fit errors) combined in
// quadrature with the systematic term; a single-mirror set gets sigma 0.
Quantity mirror_stats(const MirrorSet& set);

// L_tot = 2 pi / F, in ppm.
Quantity total_loss_from_finesse(const Quantity& finesse);

struct OutcouplingResult {
    Quantity efficiency;    // dimensionless, T / L_tot; sigma_plus clamped at 1
    Quantity transmittance; // ppm, echoed input
    Quantity total_loss;    // ppm, echoed input
    bool clamped = false;
};

// Fraction of the total loss exiting through one mirror. The central value
// must land in (0, 1]; when value + sigma would exceed 1 the upper bar is
// clamped to 1 - value and the result marked clamped.
OutcouplingResult outcoupling(const Quantity& mirror_transmittance,
                              const Quantity& total_loss);

} // namespace cavchar::budget

#endif
