#include "cavchar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "cavchar/budget.hpp"
#include "cavchar/coupling.hpp"
#include "cavchar/decimal.hpp"
#include "cavchar/errors.hpp"
#include "cavchar/geometry.hpp"
#include "cavchar/lineshape.hpp"
#include "cavchar/mech.hpp"
#include "cavchar/trace_io.hpp"
#include "cavchar/version.hpp"

namespace cavchar::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw invalid_input("cannot open input file: " + path);
    }
    try {
        json root;
        in >> root;
        return root;
    } catch (const json::exception& e) {
        throw invalid_input(path + ": malformed JSON: " + e.what());
    }
}

double number_from(const json& j, const char* what) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return dec_parse(j.get<std::string>());
    }
    throw invalid_input(std::string(what) + " must be a number or a decimal string");
}

json make_provenance(const std::vector<std::string>& input_paths,
                     const std::optional<PropagationMode>& mode) {
    json inputs = json::array();
    for (const std::string& path : input_paths) {
        inputs.push_back(json{{"path", path}, {"content_hash", hash_file(path)}});
    }
    json prov{{"tool_version", kToolVersion}, {"inputs", inputs}};
    if (mode) {
        prov["propagation_mode"] = propagation_mode_name(*mode);
    }
    return prov;
}

std::vector<twolaser::LaserLine> parse_lasers(const json& root, double default_sigma_hz) {
    if (!root.contains("lasers") || !root["lasers"].is_array() || root["lasers"].empty()) {
        throw invalid_input("measurement file has no laser lines");
    }
    std::vector<twolaser::LaserLine> lines;
    for (const json& entry : root["lasers"]) {
        const std::string label =
            entry.value("label", "line-" + std::to_string(lines.size()));
        if (!entry.contains("frequency_hz")) {
            throw invalid_input("laser line '" + label + "' is missing frequency_hz");
        }
        if (!entry.contains("longitudinal_offset") || !entry.contains("transverse_order")) {
            throw invalid_input("laser line '" + label +
                                "' needs longitudinal_offset and transverse_order");
        }
        const double freq = number_from(entry["frequency_hz"], "frequency_hz");
        const double sigma = entry.contains("sigma_hz")
                                 ? number_from(entry["sigma_hz"], "sigma_hz")
                                 : default_sigma_hz;
        lines.push_back(twolaser::make_line(label, freq,
                                            entry["longitudinal_offset"].get<int>(),
                                            entry["transverse_order"].get<int>(), sigma));
    }
    return lines;
}

const twolaser::LaserLine& find_line(const std::vector<twolaser::LaserLine>& lines,
                                     int offset, int order, const char* missing) {
    const twolaser::LaserLine* found = nullptr;
    for (const twolaser::LaserLine& line : lines) {
        if (line.longitudinal_offset == offset && line.transverse_order == order) {
            if (found) {
                throw invalid_input("duplicate laser line for mode (offset " +
                                    std::to_string(offset) + ", order " +
                                    std::to_string(order) + ")");
            }
            found = &line;
        }
    }
    if (!found) {
        throw invalid_input(missing);
    }
    return *found;
}

struct GeometrySolution {
    geometry::CavityGeometry geo;
    Quantity fsr;
    Quantity trans;
};

GeometrySolution solve_from_lasers(const json& root, const CommonOpts& opts) {
    const auto lines = parse_lasers(root, opts.wlm_sigma_hz);
    const auto& reference =
        find_line(lines, 0, 0, "missing reference line (longitudinal_offset 0, transverse_order 0)");
    const auto& probe00 =
        find_line(lines, 1, 0, "missing longitudinal probe (longitudinal_offset 1, transverse_order 0)");
    const auto& probe10 =
        find_line(lines, 1, 1, "missing transverse probe (longitudinal_offset 1, transverse_order 1)");

    GeometrySolution sol;
    sol.fsr = twolaser::reduce_fsr({reference, probe00}, opts.propagation);
    sol.trans = twolaser::reduce_trans({reference, probe10}, sol.fsr, opts.propagation);

    Quantity lambda;
    if (root.contains("wavelength_m")) {
        lambda = quantity_from_json(root["wavelength_m"], Unit::meter, "wavelength_m");
    } else {
        // Default: the wavelength of the laser addressing the TEM00 probe mode.
        const Quantity in[] = {probe00.frequency};
        lambda = propagate(
            [](std::span<const double> x) { return geometry::kSpeedOfLight / x[0]; },
            in, Unit::meter);
    }
    sol.geo = twolaser::solve_geometry(sol.fsr, sol.trans, lambda);
    return sol;
}

json geometry_json(const geometry::CavityGeometry& geo) {
    return json{
        {"fsr_hz", quantity_to_json(geo.fsr)},
        {"length_m", quantity_to_json(geo.length)},
        {"gouy_rad", quantity_to_json(geo.gouy)},
        {"radius_m", quantity_to_json(geo.radius)},
        {"waist_m", quantity_to_json(geo.waist)},
        {"rayleigh_m", quantity_to_json(geo.rayleigh)},
        {"mode_volume_m3", quantity_to_json(geo.mode_volume)},
        {"wavelength_m", quantity_to_json(geo.wavelength)},
    };
}

std::string resolve_relative(const std::string& base_file, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) {
        return path;
    }
    return (fs::path(base_file).parent_path() / p).string();
}

// Mean of the per-shot linewidths; sigma is the standard error of that mean,
// or the single fit's sigma when there is only one shot.
Quantity pooled_fwhm(const std::vector<std::pair<double, double>>& shots) {
    const double n = static_cast<double>(shots.size());
    double mean = 0.0;
    for (const auto& [fwhm, sigma] : shots) {
        mean += fwhm;
    }
    mean /= n;
    if (shots.size() == 1) {
        return Quantity::symmetric(mean, shots.front().second, Unit::hertz);
    }
    double ss = 0.0;
    for (const auto& [fwhm, sigma] : shots) {
        ss += (fwhm - mean) * (fwhm - mean);
    }
    const double standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return Quantity::symmetric(mean, standard_error, Unit::hertz);
}

} // namespace

json quantity_to_json(const Quantity& q) {
    json j{{"value", dec_string(q.value)}, {"unit", unit_name(q.unit)}};
    if (q.symmetric_sigma()) {
        j["sigma"] = dec_string(q.sigma_plus);
    } else {
        j["sigma_minus"] = dec_string(q.sigma_minus);
        j["sigma_plus"] = dec_string(q.sigma_plus);
    }
    return j;
}

Quantity quantity_from_json(const json& j, Unit expected, const char* what) {
    if (j.is_number() || j.is_string()) {
        return Quantity::exact(number_from(j, what), expected);
    }
    if (!j.is_object()) {
        throw invalid_input(std::string(what) + " must be a number, a decimal string, "
                                                "or a {value, sigma} object");
    }
    if (!j.contains("value")) {
        throw invalid_input(std::string(what) + " is missing 'value'");
    }
    if (j.contains("unit")) {
        const Unit u = unit_from_name(j["unit"].get<std::string>());
        if (u != expected) {
            throw invalid_input(std::string(what) + " carries unit " + unit_name(u) +
                                ", expected " + unit_name(expected));
        }
    }
    const double value = number_from(j["value"], what);
    if (j.contains("sigma_minus") || j.contains("sigma_plus")) {
        if (!j.contains("sigma_minus") || !j.contains("sigma_plus")) {
            throw invalid_input(std::string(what) +
                                " needs both sigma_minus and sigma_plus");
        }
        return Quantity::asymmetric(value, number_from(j["sigma_minus"], what),
                                    number_from(j["sigma_plus"], what), expected);
    }
    const double sigma = j.contains("sigma") ? number_from(j["sigma"], what) : 0.0;
    return Quantity::symmetric(value, sigma, expected);
}

json run_geometry(const std::string& input_path, const CommonOpts& opts) {
    const json root = load_json(input_path);
    const GeometrySolution sol = solve_from_lasers(root, opts);
    json frag;
    frag["geometry"] = geometry_json(sol.geo);
    frag["provenance"] = make_provenance({input_path}, opts.propagation);
    return frag;
}

json run_fit(const std::string& trace_path, const std::string& curve_out_path) {
    const auto trace = read_trace_csv(trace_path);
    const auto fit = lineshape::fit_lorentzian(trace);

    json params{
        {"amplitude", quantity_to_json(Quantity::symmetric(
                          fit.params.amplitude, fit.sigma.amplitude, Unit::dimensionless))},
        {"center_hz", quantity_to_json(Quantity::symmetric(
                          fit.params.center, fit.sigma.center, Unit::hertz))},
        {"fwhm_hz", quantity_to_json(Quantity::symmetric(
                        fit.params.fwhm, fit.sigma.fwhm, Unit::hertz))},
        {"offset", quantity_to_json(Quantity::symmetric(
                       fit.params.offset, fit.sigma.offset, Unit::dimensionless))},
    };
    json section{
        {"params", params},
        {"iterations", fit.iterations},
        {"rms_residual", dec_string(fit.rms_residual)},
    };

    if (!curve_out_path.empty()) {
        std::ofstream out(curve_out_path, std::ios::binary);
        if (!out) {
            throw invalid_input("cannot write curve file: " + curve_out_path);
        }
        out << lineshape::abscissa_header(trace.kind) << ",value,fit\n";
        for (std::size_t i = 0; i < trace.abscissa.size(); ++i) {
            out << dec_string(trace.abscissa[i]) << ',' << dec_string(trace.values[i]) << ','
                << dec_string(lineshape::lorentzian_eval(fit.params, trace.abscissa[i]))
                << '\n';
        }
        section["curve"] = json{{"path", curve_out_path}};
    }

    json frag;
    frag["fit"] = section;
    frag["provenance"] = make_provenance({trace_path}, std::nullopt);
    return frag;
}

json run_finesse(const std::string& input_path, const CommonOpts& opts) {
    const json root = load_json(input_path);

    Quantity fsr;
    if (root.contains("lasers")) {
        const auto lines = parse_lasers(root, opts.wlm_sigma_hz);
        const auto& reference = find_line(
            lines, 0, 0, "missing reference line (longitudinal_offset 0, transverse_order 0)");
        const auto& probe00 = find_line(
            lines, 1, 0, "missing longitudinal probe (longitudinal_offset 1, transverse_order 0)");
        fsr = twolaser::reduce_fsr({reference, probe00}, opts.propagation);
    } else if (root.contains("fsr_hz")) {
        fsr = quantity_from_json(root["fsr_hz"], Unit::hertz, "fsr_hz");
    } else {
        throw invalid_input("finesse needs laser lines or an fsr_hz field");
    }

    if (!root.contains("traces") || !root["traces"].is_array()) {
        throw invalid_input("measurement file has no traces");
    }

    struct Shot {
        double fwhm;
        double sigma;
        std::string polarization;
    };
    std::map<double, std::vector<Shot>> by_wavelength;
    std::vector<std::string> trace_paths;
    std::vector<std::string> failures;
    for (const json& entry : root["traces"]) {
        if (entry.value("role", "") != "finesse") {
            continue;
        }
        if (!entry.contains("path") || !entry.contains("wavelength_nm")) {
            throw invalid_input("finesse trace entries need path and wavelength_nm");
        }
        const std::string path = resolve_relative(input_path, entry["path"].get<std::string>());
        trace_paths.push_back(path);
        const double wavelength_nm = number_from(entry["wavelength_nm"], "wavelength_nm");
        const std::string polarization = entry.value("polarization", "");
        try {
            const auto fit = lineshape::fit_lorentzian(read_trace_csv(path));
            by_wavelength[wavelength_nm].push_back(
                Shot{fit.params.fwhm, fit.sigma.fwhm, polarization});
        } catch (const compute_error& e) {
            failures.push_back(path + ": " + e.what());
        }
    }
    if (!failures.empty()) {
        std::string msg = std::to_string(failures.size()) + " trace(s) failed to fit";
        for (const std::string& f : failures) {
            msg += "; " + f;
        }
        throw compute_error(msg);
    }
    if (by_wavelength.empty()) {
        throw invalid_input("measurement file has no finesse traces");
    }

    json finesse_out = json::array();
    json birefringence_out = json::array();
    for (const auto& [wavelength_nm, shots] : by_wavelength) {
        std::vector<std::pair<double, double>> all;
        std::map<std::string, std::vector<std::pair<double, double>>> by_polarization;
        for (const Shot& shot : shots) {
            all.emplace_back(shot.fwhm, shot.sigma);
            by_polarization[shot.polarization].emplace_back(shot.fwhm, shot.sigma);
        }
        const Quantity fwhm = pooled_fwhm(all);
        const auto result = lineshape::finesse_from_fwhm(fwhm, fsr);

        json cells = json::array();
        std::vector<std::pair<std::string, Quantity>> labelled;
        for (const auto& [label, cell_shots] : by_polarization) {
            const Quantity cell = pooled_fwhm(cell_shots);
            labelled.emplace_back(label, cell);
            cells.push_back(json{{"label", label},
                                 {"n_traces", cell_shots.size()},
                                 {"fwhm_hz", quantity_to_json(cell)}});
        }
        finesse_out.push_back(json{
            {"wavelength_nm", wavelength_nm},
            {"n_traces", shots.size()},
            {"fwhm_hz", quantity_to_json(result.fwhm)},
            {"fsr_hz", quantity_to_json(result.fsr)},
            {"finesse", quantity_to_json(result.finesse)},
            {"kappa_over_2pi_hz", quantity_to_json(result.kappa_over_2pi)},
            {"total_loss_ppm", quantity_to_json(result.total_loss_ppm)},
            {"polarizations", cells},
        });

        if (labelled.size() >= 2) {
            const auto verdict = lineshape::compare_polarizations(labelled);
            birefringence_out.push_back(json{
                {"wavelength_nm", wavelength_nm},
                {"max_pairwise_diff_hz", quantity_to_json(verdict.max_pairwise_diff)},
                {"combined_sigma_hz", dec_string(verdict.combined_sigma)},
                {"distinguishable", verdict.distinguishable},
            });
        }
    }

    json frag;
    frag["finesse"] = finesse_out;
    if (!birefringence_out.empty()) {
        frag["birefringence"] = birefringence_out;
    }
    std::vector<std::string> inputs{input_path};
    inputs.insert(inputs.end(), trace_paths.begin(), trace_paths.end());
    frag["provenance"] = make_provenance(inputs, opts.propagation);
    return frag;
}

json run_budget(const std::string& input_path, const CommonOpts& opts) {
    const json root = load_json(input_path);

    Quantity transmittance;
    json section;
    if (root.contains("mirror_transmittances_ppm")) {
        const json& raw = root["mirror_transmittances_ppm"];
        if (!raw.is_array() || raw.empty()) {
            throw invalid_input("mirror_transmittances_ppm must be a non-empty array");
        }
        budget::MirrorSet set;
        for (const json& entry : raw) {
            set.transmittances.push_back(
                quantity_from_json(entry, Unit::ppm, "mirror transmittance"));
        }
        set.systematic_fraction =
            root.contains("systematic_fraction")
                ? number_from(root["systematic_fraction"], "systematic_fraction")
                : 0.0;
        set.wavelength =
            root.contains("mirror_wavelength_m")
                ? quantity_from_json(root["mirror_wavelength_m"], Unit::meter,
                                     "mirror_wavelength_m")
                : Quantity::exact(0.0, Unit::meter);
        transmittance = budget::mirror_stats(set);
        section["n_mirrors"] = set.transmittances.size();
        section["systematic_fraction"] = dec_string(set.systematic_fraction);
    } else if (root.contains("transmittance_ppm")) {
        transmittance = quantity_from_json(root["transmittance_ppm"], Unit::ppm,
                                           "transmittance_ppm");
    } else {
        throw invalid_input("budget needs mirror_transmittances_ppm or transmittance_ppm");
    }

    Quantity total_loss;
    if (root.contains("total_loss_ppm")) {
        total_loss = quantity_from_json(root["total_loss_ppm"], Unit::ppm, "total_loss_ppm");
    } else if (root.contains("finesse")) {
        total_loss = budget::total_loss_from_finesse(
            quantity_from_json(root["finesse"], Unit::dimensionless, "finesse"));
    } else {
        throw invalid_input("budget needs total_loss_ppm or finesse");
    }

    const auto result = budget::outcoupling(transmittance, total_loss);
    section["transmittance_ppm"] = quantity_to_json(result.transmittance);
    section["total_loss_ppm"] = quantity_to_json(result.total_loss);
    section["efficiency"] = quantity_to_json(result.efficiency);
    section["clamped"] = result.clamped;

    json frag;
    frag["budget"] = section;
    frag["provenance"] = make_provenance({input_path}, opts.propagation);
    return frag;
}

json run_coupling(const std::string& input_path, const CommonOpts& opts) {
    const json root = load_json(input_path);

    Quantity length;
    Quantity radius;
    if (root.contains("length_m") && root.contains("radius_m")) {
        length = quantity_from_json(root["length_m"], Unit::meter, "length_m");
        radius = quantity_from_json(root["radius_m"], Unit::meter, "radius_m");
    } else if (root.contains("lasers")) {
        const GeometrySolution sol = solve_from_lasers(root, opts);
        length = sol.geo.length;
        radius = sol.geo.radius;
    } else {
        throw invalid_input("coupling needs length_m and radius_m, or laser lines");
    }

    coupling::AtomicLine line = coupling::rb87_d2();
    if (root.contains("atomic_line")) {
        const json& a = root["atomic_line"];
        line.label = a.value("label", "custom");
        if (!a.contains("gamma_over_2pi_hz") || !a.contains("wavelength_m")) {
            throw invalid_input("atomic_line needs gamma_over_2pi_hz and wavelength_m");
        }
        line.gamma_over_2pi =
            quantity_from_json(a["gamma_over_2pi_hz"], Unit::hertz, "gamma_over_2pi_hz");
        line.wavelength = quantity_from_json(a["wavelength_m"], Unit::meter, "wavelength_m");
    }

    if (!root.contains("cavity_fwhm_hz")) {
        throw invalid_input("coupling needs cavity_fwhm_hz for the strong-coupling verdict");
    }
    const Quantity fwhm =
        quantity_from_json(root["cavity_fwhm_hz"], Unit::hertz, "cavity_fwhm_hz");
    const Quantity in[] = {fwhm};
    const Quantity kappa = propagate(
        [](std::span<const double> x) { return 0.5 * x[0]; }, in, Unit::hertz);

    const Quantity g0 = coupling::g0_max(length, radius, line);
    const auto result = coupling::strong_coupling(g0, kappa, line);

    json frag;
    frag["coupling"] = json{
        {"atomic_line", line.label},
        {"length_m", quantity_to_json(length)},
        {"radius_m", quantity_to_json(radius)},
        {"g0_over_2pi_hz", quantity_to_json(result.g0_over_2pi)},
        {"kappa_over_2pi_hz", quantity_to_json(result.kappa_over_2pi)},
        {"gamma_over_2pi_hz", quantity_to_json(result.gamma_over_2pi)},
        {"margin", dec_string(result.margin)},
        {"strong", result.strong},
    };
    frag["provenance"] = make_provenance({input_path}, opts.propagation);
    return frag;
}

json run_chirp_sim(const std::string& input_path, SweepAxis axis,
                   const std::string& trace_out_path) {
    if (trace_out_path.empty()) {
        throw invalid_input("chirp-sim needs --trace-out");
    }
    const json root = load_json(input_path);
    if (!root.contains("chirp") || !root.contains("pzt_calibration") ||
        !root.contains("cavity_hwhm_hz")) {
        throw invalid_input("chirp-sim needs chirp, pzt_calibration and cavity_hwhm_hz");
    }

    const json& c = root["chirp"];
    mech::ChirpSpec spec;
    spec.amplitude = quantity_from_json(c.at("amplitude_v"), Unit::volt, "amplitude_v");
    spec.f_start_hz = number_from(c.at("f_start_hz"), "f_start_hz");
    spec.f_stop_hz = number_from(c.at("f_stop_hz"), "f_stop_hz");
    spec.duration_s = number_from(c.at("duration_s"), "duration_s");
    spec.sample_rate_hz = number_from(c.at("sample_rate_hz"), "sample_rate_hz");

    std::vector<mech::MechMode> modes;
    if (root.contains("mech_modes")) {
        for (const json& m : root["mech_modes"]) {
            modes.push_back(mech::MechMode{
                number_from(m.at("frequency_hz"), "frequency_hz"),
                number_from(m.at("quality_q"), "quality_q"),
                number_from(m.at("axial_coupling"), "axial_coupling"),
            });
        }
    }

    const json& p = root["pzt_calibration"];
    mech::PztCalibration cal{
        quantity_from_json(p.at("volts_per_fsr"), Unit::volt, "volts_per_fsr"),
        quantity_from_json(p.at("fsr_hz"), Unit::hertz, "fsr_hz"),
    };
    const double hwhm = number_from(root["cavity_hwhm_hz"], "cavity_hwhm_hz");

    auto trace = mech::simulate_sweep(spec, modes, cal, hwhm);
    if (axis == SweepAxis::instantaneous) {
        // The waveform's instantaneous frequency runs twice as fast as the
        // sweep parameter: f_inst = 2 f_sweep - f_start.
        for (double& f : trace.abscissa) {
            f = 2.0 * f - spec.f_start_hz;
        }
    }
    write_trace_csv(trace_out_path, trace);

    json frag;
    frag["chirp_sim"] = json{
        {"axis", axis == SweepAxis::sweep ? "sweep" : "instantaneous"},
        {"samples", trace.abscissa.size()},
        {"n_modes", modes.size()},
        {"detuning_amplitude_hz",
         dec_string(mech::volts_to_detuning(std::abs(spec.amplitude.value), cal))},
        {"trace", json{{"path", trace_out_path}, {"content_hash", hash_file(trace_out_path)}}},
    };
    frag["provenance"] = make_provenance({input_path}, std::nullopt);
    return frag;
}

json run_dips(const std::string& trace_path, const DipsOpts& opts) {
    auto trace = read_trace_csv(trace_path);

    double lower;
    double upper;
    if (opts.normalize_bounds) {
        lower = opts.normalize_bounds->first;
        upper = opts.normalize_bounds->second;
    } else {
        const auto [min_it, max_it] = std::minmax_element(trace.values.begin(),
                                                          trace.values.end());
        lower = *min_it;
        upper = *max_it;
    }
    // A constant trace cannot be normalized, and has no dips either way.
    const bool normalizable = upper > lower;
    const auto normalized = normalizable ? mech::normalize_trace(trace, lower, upper) : trace;
    const auto report = mech::detect_dips(normalized, opts.min_prominence);
    const auto matches = mech::match_dips(report, opts.reference_hz, opts.window_hz);

    json dips = json::array();
    for (const mech::Dip& dip : report.dips) {
        dips.push_back(json{{"frequency_hz", dec_string(dip.frequency_hz)},
                            {"depth", dec_string(dip.depth)},
                            {"prominence", dec_string(dip.prominence)}});
    }
    json match_table = json::array();
    for (const mech::DipMatch& match : matches) {
        match_table.push_back(json{{"dip_hz", dec_string(match.dip_hz)},
                                   {"reference_hz", dec_string(match.reference_hz)},
                                   {"offset_hz", dec_string(match.offset_hz)},
                                   {"matched", match.matched}});
    }
    json references = json::array();
    for (double ref : opts.reference_hz) {
        references.push_back(dec_string(ref));
    }

    json section{
        {"dips", dips},
        {"min_prominence", dec_string(opts.min_prominence)},
        {"reference_modes_hz", references},
        {"reference_match", match_table},
        {"window_hz", dec_string(opts.window_hz)},
    };
    if (normalizable) {
        section["normalization"] =
            json{{"lower", dec_string(lower)}, {"upper", dec_string(upper)}};
    }

    json frag;
    frag["mech"] = section;
    frag["provenance"] = make_provenance({trace_path}, std::nullopt);
    return frag;
}

json run_synth(const std::string& input_path, std::uint64_t seed,
               const std::string& out_dir, const CommonOpts& opts) {
    const json root = load_json(input_path);
    if (!root.contains("synth")) {
        throw invalid_input("synth needs a 'synth' ground-truth section");
    }
    const json& gt = root["synth"];
    if (!gt.contains("length_m") || !gt.contains("radius_m")) {
        throw invalid_input("synth ground truth needs length_m and radius_m");
    }

    const Quantity length = Quantity::exact(number_from(gt["length_m"], "length_m"), Unit::meter);
    const Quantity radius = Quantity::exact(number_from(gt["radius_m"], "radius_m"), Unit::meter);
    const Quantity fsr = geometry::fsr_from_length(length);
    const Quantity gouy = geometry::gouy_from_geometry(length, radius);
    const Quantity trans = geometry::trans_spacing_from_gouy(gouy, fsr);

    const double reference_hz = gt.contains("reference_frequency_hz")
                                    ? number_from(gt["reference_frequency_hz"],
                                                  "reference_frequency_hz")
                                    : 383.23957e12;
    const double resolution = gt.contains("wlm_resolution_hz")
                                  ? number_from(gt["wlm_resolution_hz"], "wlm_resolution_hz")
                                  : opts.wlm_sigma_hz;
    if (!(resolution > 0.0)) {
        throw invalid_input("wlm_resolution_hz must be positive");
    }
    const auto quantize = [resolution](double v) {
        return std::round(v / resolution) * resolution;
    };

    fs::create_directories(out_dir);
    json measurement;
    measurement["lasers"] = json::array({
        json{{"label", "reference"},
             {"frequency_hz", dec_string(quantize(reference_hz))},
             {"sigma_hz", dec_string(resolution)},
             {"longitudinal_offset", 0},
             {"transverse_order", 0}},
        json{{"label", "probe-tem00"},
             {"frequency_hz", dec_string(quantize(reference_hz + fsr.value))},
             {"sigma_hz", dec_string(resolution)},
             {"longitudinal_offset", 1},
             {"transverse_order", 0}},
        json{{"label", "probe-tem10"},
             {"frequency_hz", dec_string(quantize(reference_hz + fsr.value + trans.value))},
             {"sigma_hz", dec_string(resolution)},
             {"longitudinal_offset", 1},
             {"transverse_order", 1}},
    });

    json outputs = json::array();
    json trace_refs = json::array();
    if (gt.contains("traces")) {
        const json& tr = gt["traces"];
        const std::size_t count = tr.value("count", 0u);
        const std::size_t points = tr.value("points", 1001u);
        const double span = tr.contains("span_hz") ? number_from(tr["span_hz"], "span_hz")
                                                   : 3e8;
        const double noise = tr.contains("noise_sigma")
                                 ? number_from(tr["noise_sigma"], "noise_sigma")
                                 : 0.02;
        const double fwhm = tr.contains("fwhm_hz") ? number_from(tr["fwhm_hz"], "fwhm_hz")
                                                   : 37.1e6;
        const double wavelength_nm = tr.contains("wavelength_nm")
                                         ? number_from(tr["wavelength_nm"], "wavelength_nm")
                                         : 780.0;
        for (std::size_t i = 0; i < count; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "trace_%03zu.csv", i);
            const std::string path = (fs::path(out_dir) / name).string();
            const auto trace = lineshape::synth_trace(
                lineshape::LorentzianParams{1.0, 0.0, fwhm, 0.0},
                lineshape::GridSpec{-span / 2.0, span / 2.0, points}, noise,
                seed + static_cast<std::uint64_t>(i));
            write_trace_csv(path, trace);
            trace_refs.push_back(json{{"path", name},
                                      {"role", "finesse"},
                                      {"wavelength_nm", wavelength_nm},
                                      {"polarization", "H"}});
            outputs.push_back(json{{"path", path}, {"content_hash", hash_file(path)}});
        }
    }
    if (!trace_refs.empty()) {
        measurement["traces"] = trace_refs;
    }

    const std::string measurement_path = (fs::path(out_dir) / "measurement.json").string();
    {
        std::ofstream out(measurement_path, std::ios::binary);
        if (!out) {
            throw invalid_input("cannot write " + measurement_path);
        }
        out << measurement.dump(2) << '\n';
    }
    outputs.insert(outputs.begin(),
                   json{{"path", measurement_path}, {"content_hash", hash_file(measurement_path)}});

    json frag;
    frag["synth"] = json{
        {"seed", seed},
        {"wlm_resolution_hz", dec_string(resolution)},
        {"ground_truth", json{{"length_m", dec_string(length.value)},
                              {"radius_m", dec_string(radius.value)},
                              {"fsr_hz", dec_string(fsr.value)},
                              {"gouy_rad", dec_string(gouy.value)},
                              {"trans_hz", dec_string(trans.value)}}},
        {"outputs", outputs},
    };
    frag["provenance"] = make_provenance({input_path}, opts.propagation);
    return frag;
}

json run_report(const std::vector<std::string>& fragment_paths) {
    if (fragment_paths.empty()) {
        throw invalid_input("report needs at least one fragment");
    }
    json merged;
    json inputs = json::array();
    std::optional<std::string> mode;
    for (const std::string& path : fragment_paths) {
        const json frag = load_json(path);
        if (!frag.is_object()) {
            throw invalid_input(path + ": fragment is not a JSON object");
        }
        for (const auto& [key, value] : frag.items()) {
            if (key == "provenance") {
                if (value.contains("propagation_mode")) {
                    const std::string m = value["propagation_mode"].get<std::string>();
                    if (mode && *mode != m) {
                        throw invalid_input("fragments disagree on the propagation mode");
                    }
                    mode = m;
                }
                if (value.contains("inputs")) {
                    for (const json& input : value["inputs"]) {
                        if (std::find(inputs.begin(), inputs.end(), input) == inputs.end()) {
                            inputs.push_back(input);
                        }
                    }
                }
                continue;
            }
            if (merged.contains(key)) {
                throw invalid_input("duplicate report section: " + key);
            }
            merged[key] = value;
        }
    }
    json prov{{"tool_version", kToolVersion}, {"inputs", inputs}};
    if (mode) {
        prov["propagation_mode"] = *mode;
    }
    merged["provenance"] = prov;
    return merged;
}

void write_output(const json& fragment, const std::string& out_path) {
    const std::string text = fragment.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw invalid_input("cannot write output file: " + out_path);
    }
    out << text;
    if (!out) {
        throw invalid_input("short write on output file: " + out_path);
    }
}

} // namespace cavchar::cli
