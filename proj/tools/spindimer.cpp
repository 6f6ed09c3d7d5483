// Command-line front end: entanglement temperatures, witness curves, fits.
//
// Exit codes: 0 success, 1 failed validation or internal error, 2 usage,
// 3 entanglement not detected, 4 I/O, 5 input parse, 6 fit convergence.

#include "spindimer/datafit.hpp"
#include "spindimer/entanglement.hpp"
#include "spindimer/errors.hpp"
#include "spindimer/format.hpp"
#include "spindimer/report.hpp"
#include "spindimer/thermo.hpp"
#include "spindimer/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace spindimer;
namespace fs = std::filesystem;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kNotDetected = 3,
    kIo = 4,
    kParse = 5,
    kConvergence = 6,
};

enum class OutputFormat { csv, json };

struct GlobalOptions {
    std::optional<UnitSystem> units;
    std::optional<OutputFormat> format;
    std::string out;
};

struct GridOptions {
    double tmin = 0.05;
    double tmax = 10.0;
    int points = 400;
    std::string spacing = "log";

    std::vector<double> build() const {
        return temperature_grid(tmin, tmax, points,
                                spacing == "lin" ? GridSpacing::linear : GridSpacing::log);
    }
};

struct ModelOptions {
    std::string spin;
    double j = 0.0;
    double g = 2.0;

    DimerModel model() const { return {SpinValue::parse(spin), j, g}; }
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_model_options(CLI::App* cmd, ModelOptions& m, bool with_g) {
    cmd->add_option("--spin", m.spin, "Spin S, e.g. 1/2, 0.5, 5/2")->required();
    cmd->add_option("--j", m.j, "Exchange J/k_B in kelvin (J < 0 antiferromagnetic)")
        ->required();
    if (with_g) cmd->add_option("--g", m.g, "Lande g factor")->capture_default_str();
}

void add_grid_options(CLI::App* cmd, GridOptions& grid) {
    cmd->add_option("--tmin", grid.tmin, "Lowest temperature (K)")->capture_default_str();
    cmd->add_option("--tmax", grid.tmax, "Highest temperature (K)")->capture_default_str();
    cmd->add_option("--points", grid.points, "Number of grid points")->capture_default_str();
    cmd->add_option("--spacing", grid.spacing, "Grid spacing")
        ->check(CLI::IsMember({"lin", "log"}))
        ->capture_default_str();
}

// Output paths are checked before any computation starts.
void check_output_path(const std::string& path) {
    if (path.empty() || path == "-") return;
    const auto parent = fs::absolute(fs::path(path)).parent_path();
    if (!fs::is_directory(parent)) throw IoError("output directory " + parent.string() + " does not exist");
}

void emit(const GlobalOptions& global, const std::string& content) {
    if (global.out.empty() || global.out == "-") {
        std::cout << content;
        std::cout.flush();
    } else {
        write_file_atomic(global.out, content);
    }
}

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

int cmd_te(const GlobalOptions& global, const ModelOptions& opts) {
    const auto model = opts.model();
    const auto report = entanglement_temperature(model);

    std::string text;
    if (global.format == OutputFormat::json) {
        text = to_json(report, model).dump(2) + "\n";
    } else if (global.format == OutputFormat::csv) {
        text = "spin,j_kelvin,coefficient,detected,t_e_kelvin,diagnostic_t_e_kelvin\n" +
               model.spin.to_string() + "," + format_double(model.j_exchange) + "," +
               format_double(report.coefficient) + "," + (report.detected ? "true" : "false") + "," +
               (report.t_e ? format_double(*report.t_e) : std::string()) + "," +
               format_double(report.diagnostic_t_e) + "\n";
    } else {
        std::ostringstream out;
        out << "Temperature of entanglement, S = " << model.spin.to_string() << "\n\n";
        out << std::left << std::setw(12) << "J (K)" << std::setw(16) << "T_e^theo (K)"
            << std::setw(12) << "c_S" << "Magnetic order\n";
        out << std::setw(12) << fixed(model.j_exchange, 2)
            << std::setw(16) << fixed(report.diagnostic_t_e, 2) << std::setw(12)
            << fixed(report.coefficient, 4)
            << (model.j_exchange < 0 ? "antiferromagnetic" : "ferromagnetic") << "\n\n";
        out << "T_e = " << fixed(-report.coefficient, 2) << " J/k_B; ";
        out << (report.detected ? "entanglement detected below T_e = " + fixed(*report.t_e, 4) + " K"
                                : std::string("not detected (ferromagnetic coupling, no physical T_e)"))
            << "\n";
        text = out.str();
    }
    emit(global, text);
    return report.detected ? kOk : kNotDetected;
}

int cmd_curve(const GlobalOptions& global, const ModelOptions& opts, const GridOptions& grid_opts,
              double n_dimers) {
    const auto model = opts.model();
    const auto grid = grid_opts.build();
    const auto units = global.units.value_or(UnitSystem::reduced);
    const auto curve = witness_curve(model, grid, DimerEnsemble{n_dimers}, units);

    std::ostringstream out;
    if (global.format == OutputFormat::json) {
        nlohmann::json j;
        j["spin"] = model.spin.to_string();
        j["j_kelvin"] = model.j_exchange;
        j["g"] = model.g_factor;
        j["units"] = std::string(to_string(units));
        j["source"] = std::string(to_string(curve.source));
        auto pts = nlohmann::json::array();
        for (const auto& p : curve.points) pts.push_back({p.t_kelvin, p.chi_avg, p.ew});
        j["points"] = pts;
        out << j.dump() << "\n";
    } else {
        write_curve_csv(out, curve);
    }
    emit(global, out.str());
    return kOk;
}

struct FitCommandOptions {
    std::string input;
    std::string spin;
    std::string sample;
    double moles = 1.0;
    std::optional<double> j0;
    std::optional<double> g0;
    bool background = false;
    std::string curve_out;
};

int cmd_fit(const GlobalOptions& global, const FitCommandOptions& opts) {
    if (!fs::is_regular_file(opts.input)) throw IoError("cannot read input file " + opts.input);
    check_output_path(opts.curve_out);
    std::ifstream in(opts.input, std::ios::binary);
    if (!in) throw IoError("cannot open input file " + opts.input);

    const DatasetFormat format{SpinValue::parse(opts.spin), global.units.value_or(UnitSystem::cgs_molar),
                               opts.sample.empty() ? fs::path(opts.input).stem().string() : opts.sample,
                               opts.moles};
    const auto data = load_dataset(in, format);

    auto init = initial_guess(data);
    if (opts.j0) init.first = *opts.j0;
    if (opts.g0) init.second = *opts.g0;
    FitOptions fit_options;
    fit_options.fit_background = opts.background;
    const auto fit = fit_model(data, init, fit_options);

    std::optional<CrossingEstimate> crossing;
    if (fit.converged) {
        const auto curve = experimental_witness_curve(data, fit);
        crossing = zero_crossing(curve);
        if (!opts.curve_out.empty()) {
            std::ostringstream csv;
            write_curve_csv(csv, curve);
            write_file_atomic(opts.curve_out, csv.str());
        }
    }
    emit(global, fit_report_json(data, fit, crossing).dump(2) + "\n");
    if (!fit.converged) {
        std::cerr << "error: fit did not converge (gradient measure " << fit.gradient_norm << ")\n";
        return kConvergence;
    }
    return kOk;
}

int cmd_spectrum(const GlobalOptions& global, const ModelOptions& opts) {
    const auto model = opts.model();
    const auto levels = dimer_levels(model);
    std::ostringstream out;
    if (global.format == OutputFormat::json) {
        auto arr = nlohmann::json::array();
        for (const auto& l : levels) {
            arr.push_back({{"total_spin_j", l.total_spin_j},
                           {"degeneracy", l.degeneracy},
                           {"energy_kelvin", l.energy}});
        }
        out << arr.dump(2) << "\n";
    } else {
        out << "total_spin_j,degeneracy,energy_kelvin\n";
        for (const auto& l : levels) {
            out << l.total_spin_j << ',' << l.degeneracy << ',' << format_double(l.energy) << '\n';
        }
    }
    emit(global, out.str());
    return kOk;
}

int cmd_ground_state(const GlobalOptions& global, const ModelOptions& opts) {
    const auto model = opts.model();
    const auto gs = ground_state(model);
    std::ostringstream out;
    if (global.format == OutputFormat::json) {
        out << to_json(gs, model.spin).dump(2) << "\n";
    } else {
        out << "Ground state, S = " << model.spin.to_string() << ", J = " << model.j_exchange << " K\n";
        out << "  energy        " << format_double(gs.energy) << " K\n";
        out << "  total spin j  " << gs.total_spin_j << "\n";
        out << "  degeneracy    " << gs.degeneracy << "\n";
        out << "  entangled     " << (gs.is_entangled_pure_state ? "yes" : "no") << "\n";
        if (gs.degeneracy == 1) {
            out << "  |psi> = " << format_ket(gs.state_vectors.col(0), model.spin) << "\n";
        } else {
            out << "  (degenerate manifold, basis not unique)\n";
        }
    }
    emit(global, out.str());
    return kOk;
}

int cmd_scan(const GlobalOptions& global, const ModelOptions& opts, const GridOptions& grid_opts) {
    const auto model = opts.model();
    const auto rows = witness_vs_negativity_scan(model, grid_opts.build());
    std::ostringstream out;
    if (global.format == OutputFormat::json) {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"t_kelvin", r.t_kelvin}, {"ew", r.ew}, {"negativity", r.negativity}});
        }
        out << arr.dump() << "\n";
    } else {
        write_scan_csv(out, rows);
    }
    emit(global, out.str());
    return kOk;
}

int cmd_validate(const GlobalOptions& global, bool json, double perturb_coefficients) {
    const auto rows = run_validation({perturb_coefficients});
    bool all = true;
    for (const auto& r : rows) all = all && r.passed;

    std::ostringstream out;
    if (json || global.format == OutputFormat::json) {
        nlohmann::json j;
        j["passed"] = all;
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"group", r.group}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        }
        j["rows"] = arr;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : rows) {
            out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(14) << r.group
                << std::setw(52) << r.name << r.detail << "\n";
        }
        std::size_t failed = 0;
        for (const auto& r : rows) failed += !r.passed;
        out << "\n" << rows.size() - failed << "/" << rows.size() << " checks passed\n";
    }
    emit(global, out.str());
    return all ? kOk : kFailure;
}

struct SynthOptions {
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::string sample = "synthetic";
    double moles = 1.0;
};

int cmd_synth(const GlobalOptions& global, const ModelOptions& opts, const GridOptions& grid_opts,
              const SynthOptions& synth) {
    const auto model = opts.model();
    SynthesisOptions options;
    options.units = global.units.value_or(UnitSystem::cgs_molar);
    options.relative_noise = synth.noise;
    options.seed = synth.seed;
    options.sample_label = synth.sample;
    options.moles_of_dimers_per_mol = synth.moles;
    const auto data = synthesize_dataset(model, grid_opts.build(), options);
    std::ostringstream out;
    write_dataset_csv(out, data);
    emit(global, out.str());
    return kOk;
}

int report_error(const char* kind, const std::exception& e, int code) {
    std::cerr << "error (" << kind << "): " << e.what() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal entanglement of Heisenberg spin dimers"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--units", global.units, "Unit system for susceptibilities")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, UnitSystem>{{"reduced", UnitSystem::reduced}, {"cgs", UnitSystem::cgs_molar}}));
    app.add_option("--format", global.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}));
    app.add_option("--out", global.out, "Output path (default stdout)");

    ModelOptions model;
    GridOptions grid;

    auto* te = app.add_subcommand("te", "Entanglement temperature of a dimer");
    add_model_options(te, model, false);

    auto* curve = app.add_subcommand("curve", "Model witness curve (t_kelvin,chi,ew)");
    add_model_options(curve, model, true);
    add_grid_options(curve, grid);
    double n_dimers = 1.0;
    curve->add_option("--n-dimers", n_dimers, "Dimers (reduced) or moles of dimers per mole (cgs)")
        ->capture_default_str();

    FitCommandOptions fit;
    auto* fitc = app.add_subcommand("fit", "Fit J and g to chi(T) data and locate EW = 0");
    fitc->add_option("--input", fit.input, "CSV with t_kelvin,chi_emu_per_mol[,sigma_emu_per_mol]")->required();
    fitc->add_option("--spin", fit.spin, "Spin S of the dimer ions")->required();
    fitc->add_option("--sample", fit.sample, "Sample label (default: input file stem)");
    fitc->add_option("--moles", fit.moles, "Moles of dimers per mole of formula units")->capture_default_str();
    fitc->add_option("--j0", fit.j0, "Initial J (default: Curie-Weiss estimate)");
    fitc->add_option("--g0", fit.g0, "Initial g (default 2)");
    fitc->add_flag("--background", fit.background, "Fit an additive temperature-independent chi_0");
    fitc->add_option("--curve-out", fit.curve_out, "Also write the experimental EW curve here");

    auto* spectrum = app.add_subcommand("spectrum", "Zero-field levels E_j of the dimer");
    add_model_options(spectrum, model, false);

    auto* gs = app.add_subcommand("ground-state", "Ground state of the dimer");
    add_model_options(gs, model, false);

    auto* scan = app.add_subcommand("scan", "EW next to negativity on a temperature grid");
    add_model_options(scan, model, true);
    add_grid_options(scan, grid);

    bool validate_json = false;
    double perturb_coefficients = 0.0;
    auto* validate = app.add_subcommand("validate", "Run the built-in regression checks");
    validate->add_flag("--json", validate_json, "Machine-readable summary");
    validate->add_option("--perturb-coefficients", perturb_coefficients,
                         "Shift the expected reference coefficients (negative control)")
        ->group("");

    SynthOptions synth;
    auto* synthc = app.add_subcommand("synth", "Write a synthetic chi(T) dataset from the model");
    add_model_options(synthc, model, true);
    add_grid_options(synthc, grid);
    synthc->add_option("--noise", synth.noise, "Relative Gaussian noise (adds a sigma column)");
    synthc->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
    synthc->add_option("--sample", synth.sample, "Sample label")->capture_default_str();
    synthc->add_option("--moles", synth.moles, "Moles of dimers per mole")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (validate_json && global.format == OutputFormat::csv) {
            throw UsageError("--json conflicts with --format csv");
        }
        check_output_path(global.out);

        if (te->parsed()) return cmd_te(global, model);
        if (curve->parsed()) return cmd_curve(global, model, grid, n_dimers);
        if (fitc->parsed()) return cmd_fit(global, fit);
        if (spectrum->parsed()) return cmd_spectrum(global, model);
        if (gs->parsed()) return cmd_ground_state(global, model);
        if (scan->parsed()) return cmd_scan(global, model, grid);
        if (validate->parsed()) return cmd_validate(global, validate_json, perturb_coefficients);
        if (synthc->parsed()) return cmd_synth(global, model, grid, synth);
    } catch (const UsageError& e) {
        return report_error("usage", e, kUsage);
    } catch (const ZeroExchange& e) {
        return report_error("usage", e, kUsage);
    } catch (const InvalidArgument& e) {
        return report_error("usage", e, kUsage);
    } catch (const NonPositiveTemperature& e) {
        return report_error("usage", e, kUsage);
    } catch (const IoError& e) {
        return report_error("io", e, kIo);
    } catch (const ParseError& e) {
        return report_error("parse", e, kParse);
    } catch (const NonMonotonicTemperature& e) {
        return report_error("parse", e, kParse);
    } catch (const EmptyDataset& e) {
        return report_error("parse", e, kParse);
    } catch (const NonConvergence& e) {
        return report_error("convergence", e, kConvergence);
    } catch (const SingularJacobian& e) {
        return report_error("convergence", e, kConvergence);
    } catch (const std::exception& e) {
        return report_error("internal", e, kFailure);
    }
    return kUsage;
}
