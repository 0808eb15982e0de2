#include "cavchar/mech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cavchar/errors.hpp"

namespace cavchar::mech {

using lineshape::AbscissaKind;
using lineshape::TransmissionTrace;

namespace {

void validate_chirp(const ChirpSpec& spec) {
    require_unit(spec.amplitude, Unit::volt, "chirp amplitude");
    if (!(spec.f_start_hz >= 0.0)) {
        throw invalid_input("chirp start frequency must be non-negative");
    }
    if (!(spec.f_stop_hz > spec.f_start_hz)) {
        throw invalid_input("chirp stop frequency must exceed the start frequency");
    }
    if (!(spec.duration_s > 0.0)) {
        throw invalid_input("chirp duration must be positive");
    }
    if (!(spec.sample_rate_hz > 4.0 * spec.f_stop_hz)) {
        throw invalid_input("sample rate must exceed four times the stop frequency");
    }
}

void validate_mode(const MechMode& mode) {
    if (!(mode.frequency_hz > 0.0)) {
        throw invalid_input("mechanical mode frequency must be positive");
    }
    if (!(mode.quality_q > 0.0)) {
        throw invalid_input("mechanical quality factor must be positive");
    }
    if (!(mode.axial_coupling >= 0.0 && mode.axial_coupling <= 1.0)) {
        throw invalid_input("axial coupling must lie in [0, 1]");
    }
}

void require_time_in_sweep(const ChirpSpec& spec, double t) {
    if (!(t >= 0.0 && t <= spec.duration_s)) {
        throw invalid_input("time must lie within the sweep duration");
    }
}

void validate_calibration(const PztCalibration& cal) {
    require_unit(cal.volts_per_fsr, Unit::volt, "pzt calibration");
    require_unit(cal.fsr, Unit::hertz, "pzt calibration fsr");
    if (!(cal.volts_per_fsr.value > 0.0)) {
        throw invalid_input("volts-per-fsr must be positive");
    }
    if (!(cal.fsr.value > 0.0)) {
        throw invalid_input("calibration fsr must be positive");
    }
}

} // namespace

double volts_to_detuning(double volts, const PztCalibration& cal) {
    validate_calibration(cal);
    return volts / cal.volts_per_fsr.value * cal.fsr.value;
}

double chirp_waveform(const ChirpSpec& spec, double t) {
    validate_chirp(spec);
    require_time_in_sweep(spec, t);
    const double rate = (spec.f_stop_hz - spec.f_start_hz) / spec.duration_s;
    return spec.amplitude.value *
           std::sin(2.0 * std::numbers::pi * (rate * t + spec.f_start_hz) * t);
}

double sweep_frequency(const ChirpSpec& spec, double t) {
    validate_chirp(spec);
    require_time_in_sweep(spec, t);
    return spec.f_start_hz + (spec.f_stop_hz - spec.f_start_hz) * t / spec.duration_s;
}

double instantaneous_frequency(const ChirpSpec& spec, double t) {
    validate_chirp(spec);
    require_time_in_sweep(spec, t);
    return spec.f_start_hz + 2.0 * (spec.f_stop_hz - spec.f_start_hz) * t / spec.duration_s;
}

double oscillator_response(const MechMode& mode, double f) {
    validate_mode(mode);
    if (!(f >= 0.0)) {
        throw invalid_input("drive frequency must be non-negative");
    }
    const double r = f / mode.frequency_hz;
    const double detune = 1.0 - r * r;
    const double damp = r / mode.quality_q;
    return 1.0 / std::sqrt(detune * detune + damp * damp);
}

double avg_transmission(double detuning_amplitude, double hwhm) {
    if (!(hwhm > 0.0)) {
        throw invalid_input("cavity half width must be positive");
    }
    if (!(detuning_amplitude >= 0.0)) {
        throw invalid_input("detuning amplitude must be non-negative");
    }
    const double x = detuning_amplitude / hwhm;
    return 1.0 / std::sqrt(1.0 + x * x);
}

TransmissionTrace simulate_sweep(const ChirpSpec& spec, const std::vector<MechMode>& modes,
                                 const PztCalibration& cal, double cavity_hwhm_hz) {
    validate_chirp(spec);
    validate_calibration(cal);
    for (const MechMode& mode : modes) {
        validate_mode(mode);
    }
    if (!(cavity_hwhm_hz > 0.0)) {
        throw invalid_input("cavity half width must be positive");
    }

    const double d0 = volts_to_detuning(std::abs(spec.amplitude.value), cal);
    const std::size_t count =
        static_cast<std::size_t>(spec.duration_s * spec.sample_rate_hz) + 1;

    TransmissionTrace trace;
    trace.kind = AbscissaKind::sweep_frequency;
    trace.abscissa.resize(count);
    trace.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate_hz;
        const double f =
            spec.f_start_hz + (spec.f_stop_hz - spec.f_start_hz) * t / spec.duration_s;
        double gain = 1.0; // rigid mirror: the PZT drive passes straight through
        if (!modes.empty()) {
            gain = 0.0;
            for (const MechMode& mode : modes) {
                const double r = f / mode.frequency_hz;
                const double detune = 1.0 - r * r;
                const double damp = r / mode.quality_q;
                gain += mode.axial_coupling / std::sqrt(detune * detune + damp * damp);
            }
        }
        const double x = d0 * gain / cavity_hwhm_hz;
        trace.abscissa[i] = f;
        trace.values[i] = 1.0 / std::sqrt(1.0 + x * x);
    }
    return trace;
}

TransmissionTrace normalize_trace(const TransmissionTrace& trace, double lower, double upper) {
    if (!(upper > lower)) {
        throw invalid_input("normalization upper bound must exceed the lower bound");
    }
    TransmissionTrace out = trace;
    const double span = upper - lower;
    for (double& v : out.values) {
        v = std::clamp((v - lower) / span, 0.0, 1.0);
    }
    return out;
}

DipReport detect_dips(const TransmissionTrace& trace, double min_prominence) {
    if (trace.kind != AbscissaKind::sweep_frequency) {
        throw invalid_input("dip detection expects a normalized sweep-frequency trace");
    }
    if (!(min_prominence >= 0.0)) {
        throw invalid_input("minimum prominence must be non-negative");
    }
    const std::size_t n = trace.values.size();
    if (trace.abscissa.size() != n) {
        throw invalid_input("trace abscissa and value columns differ in length");
    }
    if (n < 3) {
        throw invalid_input("dip detection needs at least 3 samples");
    }

    const std::vector<double>& x = trace.abscissa;
    const std::vector<double>& v = trace.values;
    DipReport report;
    report.min_prominence = min_prominence;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(v[i] < v[i - 1] && v[i] < v[i + 1])) {
            continue;
        }
        // Prominence of the inverted peak: climb each side until a deeper
        // sample (or the edge) and take the lower of the two barrier heights.
        double left_barrier = v[i];
        for (std::size_t j = i; j-- > 0;) {
            left_barrier = std::max(left_barrier, v[j]);
            if (v[j] < v[i]) {
                break;
            }
        }
        double right_barrier = v[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            right_barrier = std::max(right_barrier, v[j]);
            if (v[j] < v[i]) {
                break;
            }
        }
        const double prominence = std::min(left_barrier, right_barrier) - v[i];
        if (prominence < min_prominence) {
            continue;
        }

        // Three-point parabolic refinement around the sampled minimum.
        double freq = x[i];
        double value = v[i];
        const double curvature = v[i - 1] - 2.0 * v[i] + v[i + 1];
        if (curvature > 0.0) {
            const double h = 0.5 * (x[i + 1] - x[i - 1]);
            const double shift = 0.5 * (v[i - 1] - v[i + 1]) / curvature;
            freq = x[i] + std::clamp(shift, -1.0, 1.0) * h;
            value = v[i] - 0.125 * (v[i - 1] - v[i + 1]) * (v[i - 1] - v[i + 1]) / curvature;
        }
        report.dips.push_back(Dip{freq, std::clamp(1.0 - value, 0.0, 1.0), prominence});
    }
    return report;
}

std::vector<DipMatch> match_dips(const DipReport& report,
                                 const std::vector<double>& reference_hz,
                                 double window_hz) {
    if (!(window_hz >= 0.0)) {
        throw invalid_input("match window must be non-negative");
    }
    std::vector<DipMatch> matches;
    matches.reserve(report.dips.size());
    for (const Dip& dip : report.dips) {
        DipMatch match;
        match.dip_hz = dip.frequency_hz;
        double best = std::numeric_limits<double>::infinity();
        for (double ref : reference_hz) {
            const double distance = std::abs(dip.frequency_hz - ref);
            if (distance < best) {
                best = distance;
                match.reference_hz = ref;
                match.offset_hz = dip.frequency_hz - ref;
            }
        }
        match.matched = !reference_hz.empty() && best <= window_hz;
        matches.push_back(match);
    }
    return matches;
}

} // namespace cavchar::mech
