#ifndef CAVCHAR_CLI_HPP
#define CAVCHAR_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cavchar/quantity.hpp"
#include "cavchar/twolaser.hpp"

namespace cavchar::cli {

enum class SweepAxis { sweep, instantaneous };

// Flags shared across subcommands. wlm_sigma_hz is the default per-line sigma
// applied where a measurement file omits one (CAVCHAR_PRECISION overrides it).
struct CommonOpts {
    PropagationMode propagation = PropagationMode::quadrature;
    double wlm_sigma_hz = twolaser::kDefaultWlmSigmaHz;
};

// Each run_* implements one subcommand: it reads its inputs, computes, writes
// any side files, and returns the report fragment (sections + provenance).
// Input problems raise invalid_input, numerical failures compute_error; the
// binary's main() maps those to exit codes 2 and 3.

nlohmann::json run_geometry(const std::string& input_path, const CommonOpts& opts);

nlohmann::json run_fit(const std::string& trace_path, const std::string& curve_out_path);

nlohmann::json run_finesse(const std::string& input_path, const CommonOpts& opts);

nlohmann::json run_budget(const std::string& input_path, const CommonOpts& opts);

nlohmann::json run_coupling(const std::string& input_path, const CommonOpts& opts);

nlohmann::json run_chirp_sim(const std::string& input_path, SweepAxis axis,
                             const std::string& trace_out_path);

struct DipsOpts {
    double min_prominence = 0.02;
    double window_hz = 2000.0;
    std::optional<std::pair<double, double>> normalize_bounds; // lower, upper
    std::vector<double> reference_hz;
};

nlohmann::json run_dips(const std::string& trace_path, const DipsOpts& opts);

nlohmann::json run_synth(const std::string& input_path, std::uint64_t seed,
                         const std::string& out_dir, const CommonOpts& opts);

nlohmann::json run_report(const std::vector<std::string>& fragment_paths);

// Serialize the fragment (dump(2) + trailing newline) to the path, or to
// stdout when the path is empty.
void write_output(const nlohmann::json& fragment, const std::string& out_path);

// JSON <-> Quantity helpers, shared with the tests.
nlohmann::json quantity_to_json(const Quantity& q);
Quantity quantity_from_json(const nlohmann::json& j, Unit expected, const char* what);

} // namespace cavchar::cli

#endif
