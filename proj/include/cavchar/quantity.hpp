#ifndef CAVCHAR_QUANTITY_HPP
#define CAVCHAR_QUANTITY_HPP

#include <functional>
#include <span>
#include <string>

namespace cavchar {

// Unit tags carried by every measured or derived value. There is no unit
// algebra: addition/subtraction demands matching tags, and every nonlinear
// derivation goes through propagate() with an explicit output unit.
enum class Unit {
    hertz,
    meter,
    meter2,
    meter3,
    radian,
    dimensionless,
    volt,
    ppm,
    second,
};

std::string unit_name(Unit u);
Unit unit_from_name(const std::string& name);

// How the sigma of a frequency difference is formed.
//   quadrature: root-sum-square of independent Gaussian inputs (default).
//   resolution: keep the dominant instrument resolution. A wavelength meter
//               that resolves 10 MHz still resolves 10 MHz on a difference;
//               this mode reproduces that bookkeeping.
enum class PropagationMode { quadrature, resolution };

std::string propagation_mode_name(PropagationMode mode);
PropagationMode propagation_mode_from_name(const std::string& name);

// A value with a one-sigma confidence band. Bands are symmetric everywhere
// except where an upper bound gets clamped against a physical limit (see
// budget::outcoupling); arithmetic on an asymmetric quantity is an error.
struct Quantity {
    double value = 0.0;
    double sigma_minus = 0.0; // downward one-sigma half width, >= 0
    double sigma_plus = 0.0;  // upward one-sigma half width, >= 0
    Unit unit = Unit::dimensionless;

    static Quantity exact(double value, Unit unit);
    static Quantity symmetric(double value, double sigma, Unit unit);
    static Quantity asymmetric(double value, double sigma_minus, double sigma_plus, Unit unit);

    bool symmetric_sigma() const { return sigma_minus == sigma_plus; }

    // The symmetric sigma; throws invalid_input when the band is asymmetric.
    double sigma() const;
};

// a - b with matching unit tags and symmetric sigmas.
Quantity subtract(const Quantity& a, const Quantity& b,
                  PropagationMode mode = PropagationMode::quadrature);

// First-order uncertainty propagation through an arbitrary scalar function of
// the input values, assuming independent symmetric Gaussian inputs.
// Partial derivatives come from central finite differences with step
// h_i = max(|x_i| * 1e-7, sigma_i * 1e-3); inputs with zero sigma are skipped,
// so they contribute neither cost nor uncertainty.
Quantity propagate(const std::function<double(std::span<const double>)>& f,
                   std::span<const Quantity> inputs, Unit out_unit);

// Precondition helper shared by the physics modules.
void require_unit(const Quantity& q, Unit unit, const char* what);

} // namespace cavchar

#endif
