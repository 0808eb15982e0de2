#ifndef CAVCHAR_TEST_APPROX_HPP
#define CAVCHAR_TEST_APPROX_HPP

#include <doctest.h>

// doctest::Approx is relative to max(|lhs|, |target|) plus a unit scale term.
// approx_abs pins an absolute window instead: passes iff |lhs - target| is
// below `window` (up to a 1e-18 relative slack from the scale trick).
inline doctest::Approx approx_abs(double target, double window) {
    constexpr double kScale = 1e30;
    return doctest::Approx(target).scale(kScale).epsilon(window / kScale);
}

#endif
