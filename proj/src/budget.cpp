#include "cavchar/budget.hpp"

#include <cmath>
#include <numbers>

#include "cavchar/errors.hpp"

namespace cavchar::budget {

Quantity mirror_stats(const MirrorSet& set) {
    if (set.transmittances.empty()) {
        throw invalid_input("mirror set is empty");
    }
    if (!(set.systematic_fraction >= 0.0)) {
        throw invalid_input("systematic fraction must be non-negative");
    }
    if (set.wavelength.value != 0.0) {
        require_unit(set.wavelength, Unit::meter, "mirror set wavelength");
    }
    double sum = 0.0;
    for (const Quantity& t : set.transmittances) {
        require_unit(t, Unit::ppm, "mirror transmittance");
        if (!(t.value > 0.0)) {
            throw invalid_input("mirror transmittance must be positive");
        }
        sum += t.value;
    }
    const double n = static_cast<double>(set.transmittances.size());
    const double mean = sum / n;

    double ss = 0.0;
    for (const Quantity& t : set.transmittances) {
        ss += (t.value - mean) * (t.value - mean);
    }
    const double statistical = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double systematic = set.systematic_fraction * statistical;
    return Quantity::symmetric(mean, std::hypot(statistical, systematic), Unit::ppm);
}

Quantity total_loss_from_finesse(const Quantity& finesse) {
    require_unit(finesse, Unit::dimensionless, "finesse");
    if (!(finesse.value > 0.0)) {
        throw invalid_input("finesse must be positive");
    }
    const Quantity in[] = {finesse};
    return propagate(
        [](std::span<const double> x) { return 2.0 * std::numbers::pi / x[0] * 1e6; },
        in, Unit::ppm);
}

OutcouplingResult outcoupling(const Quantity& mirror_transmittance,
                              const Quantity& total_loss) {
    require_unit(mirror_transmittance, Unit::ppm, "mirror transmittance");
    require_unit(total_loss, Unit::ppm, "total loss");
    if (!(mirror_transmittance.value > 0.0)) {
        throw invalid_input("mirror transmittance must be positive");
    }
    if (!(total_loss.value > 0.0)) {
        throw invalid_input("total loss must be positive");
    }
    if (mirror_transmittance.value > total_loss.value) {
        throw invalid_input("mirror transmittance exceeds the total loss; "
                            "the budget inputs are inconsistent");
    }

    const Quantity in[] = {mirror_transmittance, total_loss};
    const Quantity ratio = propagate(
        [](std::span<const double> x) { return x[0] / x[1]; }, in, Unit::dimensionless);

    OutcouplingResult result;
    result.transmittance = mirror_transmittance;
    result.total_loss = total_loss;
    if (ratio.value + ratio.sigma() > 1.0) {
        result.efficiency = Quantity::asymmetric(ratio.value, ratio.sigma(),
                                                 1.0 - ratio.value, Unit::dimensionless);
        result.clamped = true;
    } else {
        result.efficiency = ratio;
        result.clamped = false;
    }
    return result;
}

} // namespace cavchar::budget
