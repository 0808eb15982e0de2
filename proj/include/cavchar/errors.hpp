#ifndef CAVCHAR_ERRORS_HPP
#define CAVCHAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavchar {

// Caller handed us something unusable: mismatched units, an impossible
// geometry, a misassigned mode, a malformed file. Maps to exit code 2.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs were well-formed but the numerics gave up: fit non-convergence,
// degenerate traces, singular normal equations. Maps to exit code 3.
class compute_error : public std::runtime_error {
public:
    explicit compute_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cavchar

#endif
