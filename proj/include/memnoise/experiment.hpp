#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "memnoise/audit.hpp"
#include "memnoise/circuits.hpp"
#include "memnoise/config.hpp"
#include "memnoise/errors.hpp"

namespace memnoise::experiment {

/// Structural problem in a spec file (bad JSON, missing or mistyped keys,
/// empty seed list). Maps to exit code 2; semantic validation failures map
/// to exit code 3.
class SpecParseError : public std::runtime_error {
public:
    explicit SpecParseError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExperimentKind { Exchange, Rectify, Cascade, Passivity, FdtCheck, IdealDrive };

const char* kind_name(ExperimentKind kind);

struct OutputOptions {
    std::string dir = "results";
    bool traces = false;
    bool dump_records = false;
    std::size_t trace_decimation = 16;
};

/// A fully parsed experiment description: one testbench kind, its element
/// parameters, the global SimConfig, and an explicit seed list (wall-clock
/// seeding is never used).
struct ExperimentSpec {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::Exchange;
    UnitSystem units = UnitSystem::Normalized;
    SimConfig sim;
    std::vector<std::uint64_t> seeds;
    OutputOptions output;

    // exchange
    circuits::BranchSpec branch_a;
    circuits::BranchSpec branch_b;
    // rectify / cascade / ideal-drive
    elements::PolynomialMemristorModel memristor;
    elements::ThermalResistor shunt;
    elements::Capacitor capacitor;
    std::size_t n_stages = 1;
    // passivity
    circuits::BranchSpec device;
    double bath_temperature = 1.0;
    double threshold = 5.0;
    // fdt-check
    circuits::BranchSpec branch;
    // ideal-drive
    double drive_psd_level = 0.0;

    static ExperimentSpec parse_file(const std::filesystem::path& path);
    static ExperimentSpec parse_json(const nlohmann::json& doc, const std::string& default_name);

    /// Semantic validation (band, admissibility, cutoff, ...). Throws
    /// ConfigError / ArgumentError / InadmissibleModelError.
    void validate() const;

    /// Canonical JSON echo of the spec (used for hashing and result echo).
    nlohmann::json to_json() const;
};

/// Executes the experiment, one run per seed (parallel up to `workers`), and
/// returns the deterministic result document. Identical spec and seeds give
/// a byte-identical dump; anything wall-clock-dependent belongs in the
/// metadata side-channel, never here.
nlohmann::json run_to_json(const ExperimentSpec& spec, std::size_t workers = 1);

struct RunOutcome {
    nlohmann::json result;
    std::vector<std::filesystem::path> files_written;
};

/// run_to_json plus files: `<out>/<name>.json` (atomic write), a
/// `<name>.meta.json` side-channel with timing, and optional traces and raw
/// noise records per the spec's output options.
RunOutcome run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir,
                          std::size_t workers = 1);

/// Reads result JSONs from `result_dir` and writes plot-ready CSV bundles:
/// flux/memristance curves for every configured memristor model, a
/// (dT, measured, predicted) table over all exchange results, and an
/// (n_stages, total_dc) table over all cascade results.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& result_dir,
                                                  const std::filesystem::path& out_dir,
                                                  double q_min = -2.0, double q_max = 2.0,
                                                  std::size_t q_points = 401);

/// 64-bit FNV-1a of the canonical spec dump, hex-encoded.
std::string config_hash(const ExperimentSpec& spec);

}  // namespace memnoise::experiment
