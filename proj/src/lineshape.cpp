#include "cavchar/lineshape.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cavchar/errors.hpp"

namespace cavchar::lineshape {

std::string abscissa_header(AbscissaKind kind) {
    switch (kind) {
    case AbscissaKind::detuning: return "detuning_hz";
    case AbscissaKind::sweep_frequency: return "sweep_hz";
    case AbscissaKind::time_axis: return "time_s";
    }
    throw invalid_input("unknown abscissa kind");
}

AbscissaKind abscissa_from_header(const std::string& header) {
    if (header == "detuning_hz") return AbscissaKind::detuning;
    if (header == "sweep_hz") return AbscissaKind::sweep_frequency;
    if (header == "time_s") return AbscissaKind::time_axis;
    throw invalid_input("unknown trace axis header: " + header);
}

double lorentzian_eval(const LorentzianParams& p, double x) {
    const double u = 2.0 * (x - p.center) / p.fwhm;
    return p.offset + p.amplitude / (1.0 + u * u);
}

namespace {

void validate_params(const LorentzianParams& p, const char* what) {
    if (!(p.amplitude > 0.0)) {
        throw invalid_input(std::string(what) + ": amplitude must be positive");
    }
    if (!(p.fwhm > 0.0)) {
        throw invalid_input(std::string(what) + ": fwhm must be positive");
    }
}

// Standard normal via Box-Muller on raw mt19937_64 words; pinned here so the
// stream does not depend on the standard library's distribution internals.
double gaussian(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

TransmissionTrace synth_trace(const LorentzianParams& p, const GridSpec& grid,
                              double noise_sigma, std::uint64_t seed) {
    validate_params(p, "synth_trace");
    if (grid.points < 2) {
        throw invalid_input("synth_trace: grid needs at least 2 points");
    }
    if (!(grid.stop > grid.start)) {
        throw invalid_input("synth_trace: grid stop must exceed start");
    }
    if (!(noise_sigma >= 0.0)) {
        throw invalid_input("synth_trace: noise sigma must be non-negative");
    }

    TransmissionTrace trace;
    trace.kind = AbscissaKind::detuning;
    trace.abscissa.resize(grid.points);
    trace.values.resize(grid.points);
    const double step = (grid.stop - grid.start) / static_cast<double>(grid.points - 1);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double x = grid.start + step * static_cast<double>(i);
        trace.abscissa[i] = x;
        double v = lorentzian_eval(p, x);
        if (noise_sigma > 0.0) {
            v += noise_sigma * gaussian(rng);
        }
        trace.values[i] = v;
    }
    return trace;
}

namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelStepTol = 1e-10;
constexpr double kRelCostTol = 1e-12;

std::array<double, 4> as_array(const LorentzianParams& p) {
    return {p.amplitude, p.center, p.fwhm, p.offset};
}

LorentzianParams from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
}

double cost_at(const TransmissionTrace& t, const LorentzianParams& p) {
    double cost = 0.0;
    for (std::size_t i = 0; i < t.abscissa.size(); ++i) {
        const double r = t.values[i] - lorentzian_eval(p, t.abscissa[i]);
        cost += r * r;
    }
    return cost;
}

struct NormalEquations {
    double jtj[4][4] = {};
    double jtr[4] = {};
};

NormalEquations build_normal(const TransmissionTrace& t, const LorentzianParams& p) {
    NormalEquations eq;
    for (std::size_t i = 0; i < t.abscissa.size(); ++i) {
        const double u = 2.0 * (t.abscissa[i] - p.center) / p.fwhm;
        const double d = 1.0 + u * u;
        const double r = t.values[i] - (p.offset + p.amplitude / d);
        const double j[4] = {
            1.0 / d,                                  // d/d amplitude
            4.0 * p.amplitude * u / (p.fwhm * d * d), // d/d center
            2.0 * p.amplitude * u * u / (p.fwhm * d * d), // d/d fwhm
            1.0,                                      // d/d offset
        };
        for (int a = 0; a < 4; ++a) {
            for (int b = a; b < 4; ++b) {
                eq.jtj[a][b] += j[a] * j[b];
            }
            eq.jtr[a] += j[a] * r;
        }
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < a; ++b) {
            eq.jtj[a][b] = eq.jtj[b][a];
        }
    }
    return eq;
}

// Solve (JtJ + damping * diag(JtJ)) delta = JtR. The system is rescaled to a
// unit diagonal first; the raw normal matrix mixes O(1) amplitude columns
// with O(1/Hz) width columns and is otherwise hopelessly ill-conditioned.
std::array<double, 4> solve_damped(const NormalEquations& eq, double damping) {
    double scale[4];
    for (int k = 0; k < 4; ++k) {
        scale[k] = std::sqrt(eq.jtj[k][k]);
        if (!(scale[k] > 0.0) || !std::isfinite(scale[k])) {
            throw compute_error("fit: singular normal equations");
        }
    }
    double m[4][5];
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            m[a][b] = eq.jtj[a][b] / (scale[a] * scale[b]);
        }
        m[a][a] += damping;
        m[a][4] = eq.jtr[a] / scale[a];
    }
    // Gaussian elimination with partial pivoting on the 4x5 tableau.
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) {
                pivot = row;
            }
        }
        if (std::abs(m[pivot][col]) < 1e-300) {
            throw compute_error("fit: singular normal equations");
        }
        std::swap(m[col], m[pivot]);
        for (int row = 0; row < 4; ++row) {
            if (row == col) continue;
            const double factor = m[row][col] / m[col][col];
            for (int k = col; k < 5; ++k) {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    std::array<double, 4> delta;
    for (int k = 0; k < 4; ++k) {
        delta[k] = m[k][4] / m[k][k] / scale[k];
    }
    return delta;
}

LorentzianParams self_init(const TransmissionTrace& t) {
    const auto [min_it, max_it] = std::minmax_element(t.values.begin(), t.values.end());
    const double vmin = *min_it;
    const double vmax = *max_it;
    const std::size_t imax = static_cast<std::size_t>(max_it - t.values.begin());
    LorentzianParams p;
    p.offset = vmin;
    p.amplitude = vmax - vmin;
    p.center = t.abscissa[imax];

    const double half = 0.5 * (vmin + vmax);
    const auto interp = [&](std::size_t lo, std::size_t hi) {
        // linear interpolation of the half-maximum crossing between lo and hi
        const double dv = t.values[hi] - t.values[lo];
        const double frac = dv != 0.0 ? (half - t.values[lo]) / dv : 0.5;
        return t.abscissa[lo] + frac * (t.abscissa[hi] - t.abscissa[lo]);
    };
    double left = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = imax; i-- > 0;) {
        if (t.values[i] <= half) {
            left = interp(i, i + 1);
            break;
        }
    }
    double right = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = imax + 1; i < t.values.size(); ++i) {
        if (t.values[i] <= half) {
            right = interp(i, i - 1);
            break;
        }
    }
    const double span = t.abscissa.back() - t.abscissa.front();
    double width;
    if (std::isfinite(left) && std::isfinite(right)) {
        width = right - left;
    } else if (std::isfinite(left)) {
        width = 2.0 * (p.center - left); // peak runs off the right edge
    } else if (std::isfinite(right)) {
        width = 2.0 * (right - p.center);
    } else {
        width = span / 4.0;
    }
    p.fwhm = width > 0.0 ? width : span / 4.0;
    return p;
}

} // namespace

LorentzianFit fit_lorentzian(const TransmissionTrace& trace,
                             const std::optional<LorentzianParams>& init) {
    if (trace.kind != AbscissaKind::detuning) {
        throw invalid_input("fit expects a detuning-axis trace");
    }
    if (trace.abscissa.size() != trace.values.size()) {
        throw invalid_input("trace abscissa and value columns differ in length");
    }
    const std::size_t n = trace.abscissa.size();
    if (n < 8) {
        throw invalid_input("fit needs at least 8 samples");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(trace.abscissa[i] > trace.abscissa[i - 1])) {
            throw invalid_input("trace abscissa must be strictly increasing");
        }
    }
    const auto [min_it, max_it] = std::minmax_element(trace.values.begin(), trace.values.end());
    if (!(*max_it > *min_it)) {
        throw compute_error("degenerate trace: no contrast to fit");
    }

    LorentzianParams p = init ? *init : self_init(trace);
    if (init) {
        validate_params(p, "fit init");
    }

    double damping = 1e-3;
    double cost = cost_at(trace, p);
    if (!std::isfinite(cost)) {
        throw compute_error("fit: non-finite residuals at the starting point");
    }

    bool converged = false;
    int iter = 0;
    while (iter < kMaxIterations && !converged) {
        ++iter;
        const NormalEquations eq = build_normal(trace, p);
        const std::array<double, 4> delta = solve_damped(eq, damping);

        const std::array<double, 4> cur = as_array(p);
        std::array<double, 4> next;
        for (int k = 0; k < 4; ++k) {
            next[k] = cur[k] + delta[k];
        }
        const LorentzianParams q = from_array(next);
        const bool feasible = q.amplitude > 0.0 && q.fwhm > 0.0;
        const double cost_q = feasible ? cost_at(trace, q)
                                       : std::numeric_limits<double>::infinity();

        if (std::isfinite(cost_q) && cost_q <= cost) {
            double rel_step = 0.0;
            for (int k = 0; k < 4; ++k) {
                rel_step = std::max(rel_step,
                                    std::abs(delta[k]) / std::max(std::abs(cur[k]), 1e-300));
            }
            const double rel_drop = (cost - cost_q) / std::max(cost, 1e-300);
            p = q;
            cost = cost_q;
            damping = std::max(damping * 0.1, 1e-12);
            if (rel_step < kRelStepTol || rel_drop < kRelCostTol) {
                converged = true;
            }
        } else {
            damping *= 10.0;
            if (damping > 1e12) {
                converged = true; // step size pinned at the numerical floor
            }
        }
    }
    if (!converged) {
        throw compute_error("lorentzian fit did not converge within 200 iterations");
    }

    // Covariance from the local quadratic model, scaled by the residual
    // variance: C = s^2 (JtJ)^-1 with s^2 = SSR / (n - 4).
    const NormalEquations eq = build_normal(trace, p);
    double scale[4];
    for (int k = 0; k < 4; ++k) {
        scale[k] = std::sqrt(eq.jtj[k][k]);
        if (!(scale[k] > 0.0)) {
            throw compute_error("fit: singular normal equations at the optimum");
        }
    }
    double m[4][8]; // [M | I], Gauss-Jordan on the unit-diagonal rescaling
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            m[a][b] = eq.jtj[a][b] / (scale[a] * scale[b]);
            m[a][4 + b] = a == b ? 1.0 : 0.0;
        }
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) {
                pivot = row;
            }
        }
        if (std::abs(m[pivot][col]) < 1e-300) {
            throw compute_error("fit: singular normal equations at the optimum");
        }
        std::swap(m[col], m[pivot]);
        const double inv = 1.0 / m[col][col];
        for (int k = 0; k < 8; ++k) {
            m[col][k] *= inv;
        }
        for (int row = 0; row < 4; ++row) {
            if (row == col) continue;
            const double factor = m[row][col];
            for (int k = 0; k < 8; ++k) {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    const double s2 = cost / static_cast<double>(n - 4);
    std::array<double, 4> sig;
    for (int k = 0; k < 4; ++k) {
        const double var = m[k][4 + k] / (scale[k] * scale[k]) * s2;
        sig[k] = var > 0.0 ? std::sqrt(var) : 0.0;
    }

    LorentzianFit fit;
    fit.params = p;
    fit.sigma = from_array(sig);
    fit.iterations = iter;
    fit.rms_residual = std::sqrt(cost / static_cast<double>(n));
    return fit;
}

FinesseResult finesse_from_fwhm(const Quantity& fwhm, const Quantity& fsr) {
    require_unit(fwhm, Unit::hertz, "fwhm");
    require_unit(fsr, Unit::hertz, "fsr");
    if (!(fwhm.value > 0.0)) {
        throw invalid_input("fwhm must be positive");
    }
    if (!(fsr.value > fwhm.value)) {
        throw invalid_input("fsr must exceed the fwhm; finesse below 1 is not a cavity");
    }
    const Quantity in[] = {fwhm, fsr};
    FinesseResult result;
    result.fwhm = fwhm;
    result.fsr = fsr;
    result.finesse = propagate([](std::span<const double> x) { return x[1] / x[0]; },
                               in, Unit::dimensionless);
    result.kappa_over_2pi = propagate([](std::span<const double> x) { return 0.5 * x[0]; },
                                      in, Unit::hertz);
    result.total_loss_ppm = propagate(
        [](std::span<const double> x) {
            return 2.0 * std::numbers::pi * x[0] / x[1] * 1e6;
        },
        in, Unit::ppm);
    return result;
}

BirefringenceVerdict
compare_polarizations(const std::vector<std::pair<std::string, Quantity>>& fwhms) {
    if (fwhms.size() < 2) {
        throw invalid_input("polarization comparison needs at least two linewidths");
    }
    for (const auto& [label, q] : fwhms) {
        require_unit(q, Unit::hertz, "polarization fwhm");
        if (!(q.value > 0.0)) {
            throw invalid_input("polarization '" + label + "' has a non-positive fwhm");
        }
        q.sigma();
    }

    double best_diff = -1.0;
    double best_sigma = 0.0;
    for (std::size_t i = 0; i < fwhms.size(); ++i) {
        for (std::size_t j = i + 1; j < fwhms.size(); ++j) {
            const double diff = std::abs(fwhms[i].second.value - fwhms[j].second.value);
            if (diff > best_diff) {
                best_diff = diff;
                best_sigma = std::hypot(fwhms[i].second.sigma(), fwhms[j].second.sigma());
            }
        }
    }
    BirefringenceVerdict verdict;
    verdict.max_pairwise_diff = Quantity::symmetric(best_diff, best_sigma, Unit::hertz);
    verdict.combined_sigma = best_sigma;
    verdict.distinguishable = best_diff > 2.0 * best_sigma;
    return verdict;
}

} // namespace cavchar::lineshape
