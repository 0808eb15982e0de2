#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavchar/cli.hpp"
#include "cavchar/decimal.hpp"
#include "cavchar/errors.hpp"
#include "cavchar/version.hpp"

namespace {

cavchar::PropagationMode parse_mode(const std::string& name) {
    return cavchar::propagation_mode_from_name(name);
}

} // namespace

int main(int argc, char** argv) {
    using cavchar::cli::CommonOpts;
    using cavchar::cli::DipsOpts;
    using cavchar::cli::SweepAxis;

    CLI::App app{"Fabry-Perot cavity characterization toolkit"};
    app.set_version_flag("--version", std::string(cavchar::kToolVersion));
    app.require_subcommand(1);

    std::string input;
    std::string out;
    std::string trace;
    std::string curve_out;
    std::string trace_out;
    std::string out_dir;
    std::string propagation = "quadrature";
    std::string axis = "sweep";
    std::uint64_t seed = 1;
    double min_prominence = 0.02;
    double window_hz = 2000.0;
    std::vector<double> normalize;
    std::vector<double> references;
    std::vector<std::string> fragments;

    const auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out, "Write the JSON fragment here instead of stdout");
    };
    const auto add_propagation = [&](CLI::App* cmd) {
        cmd->add_option("--propagation", propagation, "Uncertainty combination rule")
            ->check(CLI::IsMember({"quadrature", "resolution"}))
            ->capture_default_str();
    };

    CLI::App* geometry = app.add_subcommand(
        "geometry", "Solve cavity geometry from a two-laser measurement file");
    geometry->add_option("--input", input, "Measurement JSON file")->required();
    add_propagation(geometry);
    add_out(geometry);

    CLI::App* fit = app.add_subcommand("fit", "Fit a Lorentzian to a transmission trace");
    fit->add_option("--trace", trace, "Trace CSV file")->required();
    fit->add_option("--curve-out", curve_out, "Write data plus fitted curve as CSV");
    add_out(fit);

    CLI::App* finesse = app.add_subcommand(
        "finesse", "Fit transmission traces and derive finesse and loss");
    finesse->add_option("--input", input, "Measurement JSON file")->required();
    add_propagation(finesse);
    add_out(finesse);

    CLI::App* budget_cmd = app.add_subcommand(
        "budget", "Mirror transmission statistics and outcoupling efficiency");
    budget_cmd->add_option("--input", input, "Measurement JSON file")->required();
    add_propagation(budget_cmd);
    add_out(budget_cmd);

    CLI::App* coupling_cmd = app.add_subcommand(
        "coupling", "Atom-cavity coupling rate and strong-coupling verdict");
    coupling_cmd->add_option("--input", input, "Measurement JSON file")->required();
    add_propagation(coupling_cmd);
    add_out(coupling_cmd);

    CLI::App* chirp = app.add_subcommand(
        "chirp-sim", "Simulate cavity transmission under a chirped PZT drive");
    chirp->add_option("--input", input, "Simulation JSON file")->required();
    chirp->add_option("--trace-out", trace_out, "Write the simulated trace CSV here")
        ->required();
    chirp->add_option("--axis", axis, "Abscissa convention for the trace")
        ->check(CLI::IsMember({"sweep", "instantaneous"}))
        ->capture_default_str();
    add_out(chirp);

    CLI::App* dips = app.add_subcommand(
        "dips", "Detect mechanical-resonance dips in a sweep trace");
    dips->add_option("--trace", trace, "Sweep trace CSV file")->required();
    dips->add_option("--min-prominence", min_prominence, "Minimum dip prominence")
        ->capture_default_str();
    dips->add_option("--window", window_hz, "Match window around reference modes, Hz")
        ->capture_default_str();
    dips->add_option("--normalize", normalize,
                     "Normalization bounds LOWER UPPER (default: trace min and max)")
        ->expected(2);
    dips->add_option("--reference", references, "Reference mode frequencies, Hz");
    add_out(dips);

    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic measurement set from ground-truth geometry");
    synth->add_option("--input", input, "Ground-truth JSON file")->required();
    synth->add_option("--seed", seed, "Noise seed")->capture_default_str();
    synth->add_option("--out-dir", out_dir, "Directory for generated files")->required();
    add_propagation(synth);
    add_out(synth);

    CLI::App* report = app.add_subcommand(
        "report", "Merge JSON fragments into a single report");
    report->add_option("--input", fragments, "Fragment JSON files")->required();
    add_out(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CommonOpts opts;
        opts.propagation = parse_mode(propagation);
        if (const char* env = std::getenv("CAVCHAR_PRECISION")) {
            opts.wlm_sigma_hz = cavchar::dec_parse(env);
            if (!(opts.wlm_sigma_hz > 0.0)) {
                throw cavchar::invalid_input("CAVCHAR_PRECISION must be a positive frequency in Hz");
            }
        }

        nlohmann::json fragment;
        if (geometry->parsed()) {
            fragment = cavchar::cli::run_geometry(input, opts);
        } else if (fit->parsed()) {
            fragment = cavchar::cli::run_fit(trace, curve_out);
        } else if (finesse->parsed()) {
            fragment = cavchar::cli::run_finesse(input, opts);
        } else if (budget_cmd->parsed()) {
            fragment = cavchar::cli::run_budget(input, opts);
        } else if (coupling_cmd->parsed()) {
            fragment = cavchar::cli::run_coupling(input, opts);
        } else if (chirp->parsed()) {
            const SweepAxis ax = axis == "instantaneous" ? SweepAxis::instantaneous
                                                         : SweepAxis::sweep;
            fragment = cavchar::cli::run_chirp_sim(input, ax, trace_out);
        } else if (dips->parsed()) {
            DipsOpts dopts;
            dopts.min_prominence = min_prominence;
            dopts.window_hz = window_hz;
            if (!normalize.empty()) {
                dopts.normalize_bounds = std::make_pair(normalize[0], normalize[1]);
            }
            dopts.reference_hz = references;
            fragment = cavchar::cli::run_dips(trace, dopts);
        } else if (synth->parsed()) {
            fragment = cavchar::cli::run_synth(input, seed, out_dir, opts);
        } else if (report->parsed()) {
            fragment = cavchar::cli::run_report(fragments);
        }
        cavchar::cli::write_output(fragment, out);
        return 0;
    } catch (const cavchar::invalid_input& e) {
        std::cerr << "cavchar: E_INPUT: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "cavchar: E_INPUT: " << e.what() << '\n';
        return 2;
    } catch (const cavchar::compute_error& e) {
        std::cerr << "cavchar: E_COMPUTE: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "cavchar: E_INTERNAL: " << e.what() << '\n';
        return 3;
    }
}
