#ifndef CAVCHAR_LINESHAPE_HPP
#define CAVCHAR_LINESHAPE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavchar/quantity.hpp"

namespace cavchar::lineshape {

enum class AbscissaKind { detuning, sweep_frequency, time_axis };

std::string abscissa_header(AbscissaKind kind); // detuning_hz | sweep_hz | time_s
AbscissaKind abscissa_from_header(const std::string& header);

// offset + amplitude / (1 + (2 (x - center) / fwhm)^2)
struct LorentzianParams {
    double amplitude = 1.0; // peak height above the baseline, > 0
    double center = 0.0;    // abscissa units
    double fwhm = 1.0;      // full width at half maximum, > 0
    double offset = 0.0;    // baseline
};

struct TransmissionTrace {
    std::vector<double> abscissa;
    std::vector<double> values;
    AbscissaKind kind = AbscissaKind::detuning;
};

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;         // > start
    std::size_t points = 0;    // >= 2
};

double lorentzian_eval(const LorentzianParams& p, double x);

// Model curve on a uniform grid plus seeded Gaussian noise. The generator is
// pinned (mt19937_64 + Box-Muller), so identical arguments give bit-identical
// traces; noise_sigma = 0 gives the exact curve.
TransmissionTrace synth_trace(const LorentzianParams& p, const GridSpec& grid,
                              double noise_sigma, std::uint64_t seed);

struct LorentzianFit {
    LorentzianParams params;
    LorentzianParams sigma; // one-sigma for the same-named parameter
    int iterations = 0;
    double rms_residual = 0.0;
};

// Damped least squares with the analytic Jacobian. When init is absent the
// fit seeds itself from the data (baseline = min, peak = argmax, width from
// the half-maximum crossings). Requires a detuning-axis trace with at least
// 8 strictly increasing samples; throws compute_error on flat data or
// non-convergence within 200 iterations.
LorentzianFit fit_lorentzian(const TransmissionTrace& trace,
                             const std::optional<LorentzianParams>& init = {});

struct FinesseResult {
    Quantity fwhm;           // Hz
    Quantity fsr;            // Hz
    Quantity finesse;        // dimensionless, fsr/fwhm
    Quantity kappa_over_2pi; // Hz, fwhm/2
    Quantity total_loss_ppm; // ppm, 2 pi / finesse
};

FinesseResult finesse_from_fwhm(const Quantity& fwhm, const Quantity& fsr);

// Are the polarization eigenmodes resolvable? The extreme pair of linewidths
// is distinguishable when |diff| > 2 * hypot(sigma_i, sigma_j).
struct BirefringenceVerdict {
    Quantity max_pairwise_diff; // Hz, carries the combined sigma
    double combined_sigma = 0.0; // Hz, hypot of the extreme pair's sigmas
    bool distinguishable = false;
};

BirefringenceVerdict
compare_polarizations(const std::vector<std::pair<std::string, Quantity>>& fwhms);

} // namespace cavchar::lineshape

#endif
