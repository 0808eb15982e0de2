#include "cavchar/quantity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cavchar/errors.hpp"

namespace cavchar {

std::string unit_name(Unit u) {
    switch (u) {
    case Unit::hertz: return "Hz";
    case Unit::meter: return "m";
    case Unit::meter2: return "m2";
    case Unit::meter3: return "m3";
    case Unit::radian: return "rad";
    case Unit::dimensionless: return "dimensionless";
    case Unit::volt: return "V";
    case Unit::ppm: return "ppm";
    case Unit::second: return "s";
    }
    throw invalid_input("unknown unit tag");
}

Unit unit_from_name(const std::string& name) {
    if (name == "Hz") return Unit::hertz;
    if (name == "m") return Unit::meter;
    if (name == "m2") return Unit::meter2;
    if (name == "m3") return Unit::meter3;
    if (name == "rad") return Unit::radian;
    if (name == "dimensionless") return Unit::dimensionless;
    if (name == "V") return Unit::volt;
    if (name == "ppm") return Unit::ppm;
    if (name == "s") return Unit::second;
    throw invalid_input("unknown unit name: " + name);
}

std::string propagation_mode_name(PropagationMode mode) {
    return mode == PropagationMode::quadrature ? "quadrature" : "resolution";
}

PropagationMode propagation_mode_from_name(const std::string& name) {
    if (name == "quadrature") return PropagationMode::quadrature;
    if (name == "resolution") return PropagationMode::resolution;
    throw invalid_input("unknown propagation mode: " + name);
}

namespace {

void check_sigmas(double sigma_minus, double sigma_plus) {
    if (!(sigma_minus >= 0.0) || !(sigma_plus >= 0.0)) {
        throw invalid_input("sigma must be finite and non-negative");
    }
}

} // namespace

Quantity Quantity::exact(double value, Unit unit) {
    return Quantity{value, 0.0, 0.0, unit};
}

Quantity Quantity::symmetric(double value, double sigma, Unit unit) {
    check_sigmas(sigma, sigma);
    return Quantity{value, sigma, sigma, unit};
}

Quantity Quantity::asymmetric(double value, double sigma_minus, double sigma_plus, Unit unit) {
    check_sigmas(sigma_minus, sigma_plus);
    return Quantity{value, sigma_minus, sigma_plus, unit};
}

double Quantity::sigma() const {
    if (!symmetric_sigma()) {
        throw invalid_input("quantity has an asymmetric confidence band; "
                            "arithmetic on it is not defined");
    }
    return sigma_plus;
}

void require_unit(const Quantity& q, Unit unit, const char* what) {
    if (q.unit != unit) {
        throw invalid_input(std::string(what) + " must carry unit " + unit_name(unit) +
                            ", got " + unit_name(q.unit));
    }
}

Quantity subtract(const Quantity& a, const Quantity& b, PropagationMode mode) {
    if (a.unit != b.unit) {
        throw invalid_input("cannot subtract " + unit_name(b.unit) + " from " +
                            unit_name(a.unit));
    }
    const double sa = a.sigma(); // throws on asymmetric bands
    const double sb = b.sigma();
    const double sigma = mode == PropagationMode::quadrature ? std::hypot(sa, sb)
                                                             : std::max(sa, sb);
    return Quantity::symmetric(a.value - b.value, sigma, a.unit);
}

Quantity propagate(const std::function<double(std::span<const double>)>& f,
                   std::span<const Quantity> inputs, Unit out_unit) {
    std::vector<double> x(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        x[i] = inputs[i].value;
        inputs[i].sigma(); // reject asymmetric bands up front
    }

    const double center = f(x);
    if (!std::isfinite(center)) {
        throw compute_error("propagate: function is not finite at the central point");
    }

    double variance = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double s = inputs[i].sigma();
        if (s == 0.0) {
            continue; // no uncertainty, no contribution
        }
        const double h = std::max(std::abs(x[i]) * 1e-7, s * 1e-3);
        const double saved = x[i];
        x[i] = saved + h;
        const double hi = f(x);
        x[i] = saved - h;
        const double lo = f(x);
        x[i] = saved;
        const double slope = (hi - lo) / (2.0 * h);
        if (!std::isfinite(slope)) {
            throw compute_error("propagate: non-finite difference quotient");
        }
        variance += slope * s * slope * s;
    }
    return Quantity::symmetric(center, std::sqrt(variance), out_unit);
}

} // namespace cavchar
