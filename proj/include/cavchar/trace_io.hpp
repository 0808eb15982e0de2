#ifndef CAVCHAR_TRACE_IO_HPP
#define CAVCHAR_TRACE_IO_HPP

#include <string>

#include "cavchar/lineshape.hpp"

namespace cavchar {

// Trace files are two-column CSV. Lines starting with '#' are comments; the
// first data line is the mandatory header "<axis>,value" where <axis> is one
// of detuning_hz, sweep_hz, time_s. Values are written as shortest
// round-trip decimal strings, so write followed by read is bit-exact.
lineshape::TransmissionTrace read_trace_csv(const std::string& path);
void write_trace_csv(const std::string& path, const lineshape::TransmissionTrace& trace);

} // namespace cavchar

#endif
