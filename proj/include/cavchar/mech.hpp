#ifndef CAVCHAR_MECH_HPP
#define CAVCHAR_MECH_HPP

#include <vector>

#include "cavchar/lineshape.hpp"
#include "cavchar/quantity.hpp"

namespace cavchar::mech {

// Linear chirp drive V(t) = V0 sin(2 pi ((f_f - f_i) t / T + f_i) t).
struct ChirpSpec {
    Quantity amplitude;          // V
    double f_start_hz = 0.0;     // >= 0
    double f_stop_hz = 0.0;      // > f_start_hz
    double duration_s = 0.0;     // > 0
    double sample_rate_hz = 0.0; // > 4 * f_stop_hz
};

struct MechMode {
    double frequency_hz = 0.0;   // > 0
    double quality_q = 0.0;      // > 0
    double axial_coupling = 0.0; // in [0, 1], projection onto the cavity axis
};

// PZT drive-to-detuning conversion, linear: volts_per_fsr volts scan one fsr.
struct PztCalibration {
    Quantity volts_per_fsr; // V
    Quantity fsr;           // Hz
};

struct Dip {
    double frequency_hz = 0.0; // refined minimum position
    double depth = 0.0;        // 1 - refined minimum value, in (0, 1]
    double prominence = 0.0;
};

struct DipReport {
    std::vector<Dip> dips; // ascending in frequency
    double min_prominence = 0.0;
};

struct DipMatch {
    double dip_hz = 0.0;
    bool matched = false;
    double reference_hz = 0.0; // nearest reference mode (0 when none given)
    double offset_hz = 0.0;    // dip - reference
};

double volts_to_detuning(double volts, const PztCalibration& cal);
double chirp_waveform(const ChirpSpec& spec, double t);
// Sweep-parameter frequency f_i + (f_f - f_i) t / T: the axis the drive
// synthesizer reports.
double sweep_frequency(const ChirpSpec& spec, double t);
// d/dt of the chirp phase / 2 pi = f_i + 2 (f_f - f_i) t / T: twice as fast.
double instantaneous_frequency(const ChirpSpec& spec, double t);
// |H(f)| = 1 / sqrt((1 - (f/f_k)^2)^2 + (f / (f_k Q))^2)
double oscillator_response(const MechMode& mode, double f);
// Phase-averaged Lorentzian transmission under sinusoidal detuning of
// amplitude D: <1/(1 + (D sin phi / hwhm)^2)> = 1 / sqrt(1 + (D/hwhm)^2).
double avg_transmission(double detuning_amplitude, double hwhm);

// Transmission vs sweep frequency. At each f the detuning amplitude is
// D(f) = volts_to_detuning(V0) * sum_k coupling_k |H_k(f)|; an empty mode
// list degenerates to the static response D = volts_to_detuning(V0).
lineshape::TransmissionTrace simulate_sweep(const ChirpSpec& spec,
                                            const std::vector<MechMode>& modes,
                                            const PztCalibration& cal,
                                            double cavity_hwhm_hz);

// Affine map to [lower, upper] -> [0, 1], clipped.
lineshape::TransmissionTrace normalize_trace(const lineshape::TransmissionTrace& trace,
                                             double lower, double upper);

// Prominence-filtered local minima on a normalized sweep-frequency trace,
// positions refined by a three-point parabola.
DipReport detect_dips(const lineshape::TransmissionTrace& trace, double min_prominence);

// Pair each dip with the nearest reference mode; matched iff within window.
std::vector<DipMatch> match_dips(const DipReport& report,
                                 const std::vector<double>& reference_hz,
                                 double window_hz);

} // namespace cavchar::mech

#endif
