#include "cavchar/trace_io.hpp"

#include <fstream>
#include <string>

#include "cavchar/decimal.hpp"
#include "cavchar/errors.hpp"

namespace cavchar {

namespace {

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

lineshape::TransmissionTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot open trace file: " + path);
    }

    lineshape::TransmissionTrace trace;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = strip(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto comma = body.find(',');
        if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
            throw invalid_input(path + ":" + std::to_string(line_no) +
                                ": expected exactly two comma-separated columns");
        }
        const std::string first = strip(body.substr(0, comma));
        const std::string second = strip(body.substr(comma + 1));
        if (!have_header) {
            if (second != "value") {
                throw invalid_input(path + ": header must be '<axis>,value', got '" + body + "'");
            }
            trace.kind = lineshape::abscissa_from_header(first);
            have_header = true;
            continue;
        }
        try {
            trace.abscissa.push_back(dec_parse(first));
            trace.values.push_back(dec_parse(second));
        } catch (const invalid_input&) {
            throw invalid_input(path + ":" + std::to_string(line_no) + ": malformed number");
        }
    }
    if (!have_header) {
        throw invalid_input(path + ": missing '<axis>,value' header row");
    }
    if (trace.abscissa.empty()) {
        throw invalid_input(path + ": trace has no samples");
    }
    return trace;
}

void write_trace_csv(const std::string& path, const lineshape::TransmissionTrace& trace) {
    if (trace.abscissa.size() != trace.values.size()) {
        throw invalid_input("trace abscissa and value columns differ in length");
    }
    std::ofstream out(path, std::ios::binary); // byte-stable: no newline translation
    if (!out) {
        throw invalid_input("cannot write trace file: " + path);
    }
    out << lineshape::abscissa_header(trace.kind) << ",value\n";
    for (std::size_t i = 0; i < trace.abscissa.size(); ++i) {
        out << dec_string(trace.abscissa[i]) << ',' << dec_string(trace.values[i]) << '\n';
    }
    if (!out) {
        throw invalid_input("short write on trace file: " + path);
    }
}

} // namespace cavchar
