// memnoise: deterministic stochastic-circuit simulator and Second-Law auditor.
//
// Subcommands:
//   run      execute an experiment spec, one run per seed, write JSON results
//   plot     turn a directory of results into plot-ready CSV bundles
//   validate parse and semantically check a spec without running it
//
// Exit codes: 0 success, 2 spec parse error, 3 validation/runtime error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "memnoise/errors.hpp"
#include "memnoise/experiment.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_validation = 3;

void print_error(const char* category, const std::string& message) {
    nlohmann::json err;
    err["error"] = {{"category", category}, {"message", message}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

void print_inadmissible(const memnoise::InadmissibleModelError& e) {
    nlohmann::json err;
    err["error"] = {{"category", "validation"},
                    {"message", std::string(e.what())},
                    {"witness_q", e.witness_q}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    using memnoise::experiment::ExperimentSpec;

    CLI::App app{
        "memnoise: stochastic circuit testbenches for thermal-noise physics.\n"
        "Experiment kinds: exchange (two-branch power flow), rectify (memristor\n"
        "rectifier cell), cascade (series rectifier stack), passivity (Second-Law\n"
        "audit), fdt-check (noise-spectrum compliance), ideal-drive (memristor on\n"
        "an ideal current source).\n"
        "Spec keys: name, kind, units (normalized|si), seeds,\n"
        "sim{sample_rate, band_low, band_high, n_samples, burn_in_fraction,\n"
        "k_boltzmann}, output{dir, traces, dump_records, trace_decimation},\n"
        "memristor{a, b, c, q0}, resistor branches{R, T, noisy},\n"
        "capacitor{C, v0}, n_stages, device, branch, branch_a, branch_b,\n"
        "bath_temperature, threshold, drive_psd_level."};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir;
    std::vector<std::uint64_t> seed_override;
    std::size_t workers = 1;

    auto* run = app.add_subcommand("run", "Run an experiment spec and write JSON results");
    run->add_option("spec", spec_path, "Experiment spec file (JSON)")->required();
    run->add_option("--seeds", seed_override, "Override the spec's seed list")->delimiter(',');
    run->add_option("--workers", workers, "Concurrent (experiment, seed) runs");
    run->add_option("--out", out_dir, "Output directory (defaults to the spec's output.dir)");

    std::string result_dir;
    std::string plot_out;
    double q_min = -2.0, q_max = 2.0;
    std::size_t q_points = 401;
    auto* plot = app.add_subcommand("plot", "Emit plot-ready CSV bundles from result files");
    plot->add_option("result-dir", result_dir, "Directory holding result JSON files")->required();
    plot->add_option("--out", plot_out, "Output directory for CSV bundles")->required();
    plot->add_option("--q-min", q_min, "Lower end of the charge grid for model curves");
    plot->add_option("--q-max", q_max, "Upper end of the charge grid for model curves");
    plot->add_option("--q-points", q_points, "Number of charge grid points");

    auto* validate = app.add_subcommand("validate", "Parse and validate a spec without running");
    validate->add_option("spec", spec_path, "Experiment spec file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentSpec spec = ExperimentSpec::parse_file(spec_path);
            if (!seed_override.empty()) spec.seeds = seed_override;
            if (spec.seeds.empty()) throw memnoise::experiment::SpecParseError("empty seed list");
            const std::string target = out_dir.empty() ? spec.output.dir : out_dir;
            const auto outcome = memnoise::experiment::run_experiment(spec, target, workers);
            for (const auto& file : outcome.files_written)
                std::printf("wrote %s\n", file.string().c_str());
            return exit_ok;
        }
        if (plot->parsed()) {
            const auto written =
                memnoise::experiment::emit_plot_data(result_dir, plot_out, q_min, q_max, q_points);
            for (const auto& file : written)
                std::printf("wrote %s\n", file.string().c_str());
            return exit_ok;
        }
        if (validate->parsed()) {
            ExperimentSpec spec = ExperimentSpec::parse_file(spec_path);
            spec.validate();
            std::printf("ok: %s (%s)\n", spec.name.c_str(),
                        memnoise::experiment::kind_name(spec.kind));
            return exit_ok;
        }
    } catch (const memnoise::experiment::SpecParseError& e) {
        print_error("parse", e.what());
        return exit_parse;
    } catch (const memnoise::InadmissibleModelError& e) {
        print_inadmissible(e);
        return exit_validation;
    } catch (const memnoise::ConfigError& e) {
        print_error("validation", e.what());
        return exit_validation;
    } catch (const memnoise::ArgumentError& e) {
        print_error("validation", e.what());
        return exit_validation;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return exit_validation;
    }
    return exit_ok;
}
