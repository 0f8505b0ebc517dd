#include "memnoise/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "memnoise/io.hpp"
#include "memnoise/noise.hpp"
#include "memnoise/parallel.hpp"
#include "memnoise/reference.hpp"

namespace memnoise::experiment {

using nlohmann::json;

const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Exchange: return "exchange";
        case ExperimentKind::Rectify: return "rectify";
        case ExperimentKind::Cascade: return "cascade";
        case ExperimentKind::Passivity: return "passivity";
        case ExperimentKind::FdtCheck: return "fdt-check";
        case ExperimentKind::IdealDrive: return "ideal-drive";
    }
    return "unknown";
}

namespace {

ExperimentKind parse_kind(const std::string& text) {
    if (text == "exchange") return ExperimentKind::Exchange;
    if (text == "rectify") return ExperimentKind::Rectify;
    if (text == "cascade") return ExperimentKind::Cascade;
    if (text == "passivity") return ExperimentKind::Passivity;
    if (text == "fdt-check") return ExperimentKind::FdtCheck;
    if (text == "ideal-drive") return ExperimentKind::IdealDrive;
    throw SpecParseError("unknown experiment kind '" + text +
                         "' (expected exchange|rectify|cascade|passivity|fdt-check|ideal-drive)");
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw SpecParseError(where + ": missing required key '" + key + "'");
    return obj.at(key);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    const json& value = require_key(obj, key, where);
    if (!value.is_number()) throw SpecParseError(where + "." + key + ": expected a number");
    return value.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& value = obj.at(key);
    if (!value.is_number()) throw SpecParseError(where + "." + key + ": expected a number");
    return value.get<double>();
}

bool bool_or(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& value = obj.at(key);
    if (!value.is_boolean()) throw SpecParseError(where + "." + key + ": expected a boolean");
    return value.get<bool>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback,
                      const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& value = obj.at(key);
    if (!value.is_string()) throw SpecParseError(where + "." + key + ": expected a string");
    return value.get<std::string>();
}

elements::PolynomialMemristorModel parse_memristor(const json& obj, const std::string& where) {
    elements::PolynomialMemristorModel model;
    model.a = require_number(obj, "a", where);
    model.b = require_number(obj, "b", where);
    model.c = require_number(obj, "c", where);
    model.q0 = number_or(obj, "q0", 0.0, where);
    return model;
}

elements::ThermalResistor parse_resistor(const json& obj, const std::string& where) {
    elements::ThermalResistor resistor;
    resistor.resistance = require_number(obj, "R", where);
    resistor.temperature = require_number(obj, "T", where);
    resistor.noisy = bool_or(obj, "noisy", true, where);
    return resistor;
}

elements::Capacitor parse_capacitor(const json& obj, const std::string& where) {
    elements::Capacitor cap;
    cap.capacitance = require_number(obj, "C", where);
    cap.initial_voltage = number_or(obj, "v0", 0.0, where);
    return cap;
}

circuits::BranchSpec parse_branch(const json& obj, const std::string& where) {
    const json& kind = require_key(obj, "kind", where);
    if (!kind.is_string()) throw SpecParseError(where + ".kind: expected a string");
    const std::string text = kind.get<std::string>();
    if (text == "resistor")
        return circuits::BranchSpec{circuits::BranchKind::ThermalResistor,
                                    parse_resistor(obj, where), {}};
    if (text == "memristor")
        return circuits::BranchSpec{circuits::BranchKind::Memristor, {},
                                    parse_memristor(obj, where)};
    throw SpecParseError(where + ".kind: expected 'resistor' or 'memristor'");
}

json memristor_json(const elements::PolynomialMemristorModel& model) {
    return {{"a", model.a}, {"b", model.b}, {"c", model.c}, {"q0", model.q0}};
}

json resistor_json(const elements::ThermalResistor& resistor) {
    return {{"R", resistor.resistance}, {"T", resistor.temperature}, {"noisy", resistor.noisy}};
}

json capacitor_json(const elements::Capacitor& cap) {
    return {{"C", cap.capacitance}, {"v0", cap.initial_voltage}};
}

json branch_json(const circuits::BranchSpec& branch) {
    if (branch.is_memristor()) {
        json j = memristor_json(branch.memristor);
        j["kind"] = "memristor";
        return j;
    }
    json j = resistor_json(branch.resistor);
    j["kind"] = "resistor";
    return j;
}

json estimate_json(const PowerFlowEstimate& est) {
    return {{"mean", est.mean},
            {"standard_error", est.standard_error},
            {"n_blocks", est.n_blocks},
            {"block_length", est.block_length},
            {"burn_in_discarded", est.burn_in_discarded}};
}

/// The exchange observable has a closed-form expectation only for matched
/// small-signal resistances; `predicted` is null otherwise.
json predicted_exchange_flow(const circuits::BranchSpec& a, const circuits::BranchSpec& b,
                             const SimConfig& cfg) {
    const double ra = a.small_signal_resistance();
    const double rb = b.small_signal_resistance();
    if (std::abs(ra - rb) > 1e-12 * std::max(std::abs(ra), std::abs(rb))) return nullptr;
    const double ta = a.has_noise_source() ? a.resistor.temperature : 0.0;
    const double tb = b.has_noise_source() ? b.resistor.temperature : 0.0;
    return audit::expected_exchange_power(ra, ta, tb, cfg.band_low, cfg.band_high,
                                          cfg.boltzmann_k);
}

}  // namespace

ExperimentSpec ExperimentSpec::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open spec file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecParseError("spec file is not valid JSON: " + std::string(e.what()));
    }
    return parse_json(doc, path.stem().string());
}

ExperimentSpec ExperimentSpec::parse_json(const json& doc, const std::string& default_name) {
    if (!doc.is_object()) throw SpecParseError("spec: top level must be a JSON object");

    ExperimentSpec spec;
    spec.name = default_name;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw SpecParseError("spec.name: expected a string");
        spec.name = doc.at("name").get<std::string>();
    }

    const json& kind = require_key(doc, "kind", "spec");
    if (!kind.is_string()) throw SpecParseError("spec.kind: expected a string");
    spec.kind = parse_kind(kind.get<std::string>());

    if (doc.contains("units")) {
        const json& units = doc.at("units");
        if (!units.is_string() ||
            (units.get<std::string>() != "normalized" && units.get<std::string>() != "si"))
            throw SpecParseError("spec.units: expected 'normalized' or 'si'");
        spec.units = units.get<std::string>() == "si" ? UnitSystem::Si : UnitSystem::Normalized;
    }

    const json& sim = require_key(doc, "sim", "spec");
    spec.sim.sample_rate = require_number(sim, "sample_rate", "spec.sim");
    spec.sim.band_low = require_number(sim, "band_low", "spec.sim");
    spec.sim.band_high = require_number(sim, "band_high", "spec.sim");
    const json& n_samples = require_key(sim, "n_samples", "spec.sim");
    if (!n_samples.is_number_unsigned() && !n_samples.is_number_integer())
        throw SpecParseError("spec.sim.n_samples: expected an integer");
    spec.sim.n_samples = n_samples.get<std::size_t>();
    spec.sim.burn_in_fraction = number_or(sim, "burn_in_fraction", 0.1, "spec.sim");
    spec.sim.boltzmann_k =
        number_or(sim, "k_boltzmann",
                  spec.units == UnitSystem::Si ? k_boltzmann_si : 1.0, "spec.sim");

    const json& seeds = require_key(doc, "seeds", "spec");
    if (!seeds.is_array() || seeds.empty())
        throw SpecParseError("spec.seeds: expected a non-empty array of integers");
    for (const auto& s : seeds) {
        if (!s.is_number_unsigned() && !s.is_number_integer())
            throw SpecParseError("spec.seeds: expected integers");
        spec.seeds.push_back(s.get<std::uint64_t>());
    }

    if (doc.contains("output")) {
        const json& output = doc.at("output");
        spec.output.dir = string_or(output, "dir", "results", "spec.output");
        spec.output.traces = bool_or(output, "traces", false, "spec.output");
        spec.output.dump_records = bool_or(output, "dump_records", false, "spec.output");
        spec.output.trace_decimation = static_cast<std::size_t>(
            number_or(output, "trace_decimation", 16.0, "spec.output"));
        if (spec.output.trace_decimation < 1) spec.output.trace_decimation = 1;
    }

    switch (spec.kind) {
        case ExperimentKind::Exchange:
            spec.branch_a = parse_branch(require_key(doc, "branch_a", "spec"), "spec.branch_a");
            spec.branch_b = parse_branch(require_key(doc, "branch_b", "spec"), "spec.branch_b");
            break;
        case ExperimentKind::Rectify:
        case ExperimentKind::Cascade:
            spec.memristor =
                parse_memristor(require_key(doc, "memristor", "spec"), "spec.memristor");
            spec.shunt = parse_resistor(require_key(doc, "shunt", "spec"), "spec.shunt");
            spec.capacitor =
                parse_capacitor(require_key(doc, "capacitor", "spec"), "spec.capacitor");
            if (spec.kind == ExperimentKind::Cascade) {
                const json& stages = require_key(doc, "n_stages", "spec");
                if (!stages.is_number_integer() && !stages.is_number_unsigned())
                    throw SpecParseError("spec.n_stages: expected an integer");
                spec.n_stages = stages.get<std::size_t>();
            }
            break;
        case ExperimentKind::Passivity:
            spec.device = parse_branch(require_key(doc, "device", "spec"), "spec.device");
            spec.bath_temperature = require_number(doc, "bath_temperature", "spec");
            spec.threshold = number_or(doc, "threshold", 5.0, "spec");
            break;
        case ExperimentKind::FdtCheck:
            spec.branch = parse_branch(require_key(doc, "branch", "spec"), "spec.branch");
            break;
        case ExperimentKind::IdealDrive:
            spec.memristor =
                parse_memristor(require_key(doc, "memristor", "spec"), "spec.memristor");
            spec.drive_psd_level = require_number(doc, "drive_psd_level", "spec");
            break;
    }
    return spec;
}

void ExperimentSpec::validate() const {
    sim.validate();
    switch (kind) {
        case ExperimentKind::Exchange:
            branch_a.validate();
            branch_b.validate();
            break;
        case ExperimentKind::Rectify:
        case ExperimentKind::Cascade: {
            elements::require_admissible(memristor);
            shunt.validate();
            capacitor.validate();
            const double cutoff = 1.0 / (2.0 * std::numbers::pi * shunt.resistance *
                                         capacitor.capacitance);
            if (!(cutoff < sim.band_low / 10.0))
                throw ConfigError(
                    "capacitor cutoff 1/(2*pi*R*C) must sit at least a decade below band_low");
            if (kind == ExperimentKind::Cascade && n_stages < 1)
                throw ArgumentError("n_stages must be at least 1");
            break;
        }
        case ExperimentKind::Passivity:
            device.validate();
            if (seeds.size() < 3)
                throw ArgumentError("passivity experiments need at least 3 seeds");
            if (!(threshold > 0.0)) throw ArgumentError("threshold must be positive");
            if (!(bath_temperature >= 0.0))
                throw ArgumentError("bath_temperature must be nonnegative");
            break;
        case ExperimentKind::FdtCheck:
            branch.validate();
            break;
        case ExperimentKind::IdealDrive:
            elements::require_admissible(memristor);
            if (!(drive_psd_level >= 0.0))
                throw ArgumentError("drive_psd_level must be nonnegative");
            break;
    }
}

json ExperimentSpec::to_json() const {
    json doc;
    doc["name"] = name;
    doc["kind"] = kind_name(kind);
    doc["units"] = units == UnitSystem::Si ? "si" : "normalized";
    doc["sim"] = {{"sample_rate", sim.sample_rate},
                  {"band_low", sim.band_low},
                  {"band_high", sim.band_high},
                  {"n_samples", sim.n_samples},
                  {"burn_in_fraction", sim.burn_in_fraction},
                  {"k_boltzmann", sim.boltzmann_k}};
    doc["seeds"] = seeds;
    doc["output"] = {{"dir", output.dir},
                     {"traces", output.traces},
                     {"dump_records", output.dump_records},
                     {"trace_decimation", output.trace_decimation}};
    switch (kind) {
        case ExperimentKind::Exchange:
            doc["branch_a"] = branch_json(branch_a);
            doc["branch_b"] = branch_json(branch_b);
            break;
        case ExperimentKind::Rectify:
        case ExperimentKind::Cascade:
            doc["memristor"] = memristor_json(memristor);
            doc["shunt"] = resistor_json(shunt);
            doc["capacitor"] = capacitor_json(capacitor);
            if (kind == ExperimentKind::Cascade) doc["n_stages"] = n_stages;
            break;
        case ExperimentKind::Passivity:
            doc["device"] = branch_json(device);
            doc["bath_temperature"] = bath_temperature;
            doc["threshold"] = threshold;
            break;
        case ExperimentKind::FdtCheck:
            doc["branch"] = branch_json(branch);
            break;
        case ExperimentKind::IdealDrive:
            doc["memristor"] = memristor_json(memristor);
            doc["drive_psd_level"] = drive_psd_level;
            break;
    }
    return doc;
}

std::string config_hash(const ExperimentSpec& spec) {
    const std::string dump = spec.to_json().dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char ch : dump) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

namespace {

json decisions_json(const ExperimentSpec& spec) {
    json decisions;
    decisions["seeding"] = "explicit seed list; one RNG substream per noise source";
    decisions["block_length_rule"] = "10 / band_low time units, at least 32 blocks";
    decisions["burn_in_fraction"] = spec.sim.burn_in_fraction;
    if (spec.kind == ExperimentKind::Rectify || spec.kind == ExperimentKind::Cascade) {
        decisions["rectifier_topology"] =
            "single node: Norton noise current source || shunt conductance || memristor || "
            "capacitor; DC read across the capacitor";
        decisions["integration"] =
            "fixed-step trapezoidal node update, memristor conductance at current charge";
        decisions["capacitor_cutoff_rule"] = "1/(2*pi*R*C) < band_low/10";
    }
    if (spec.kind == ExperimentKind::Cascade)
        decisions["cascade_load"] = "matched load, R_out = shunt resistance";
    if (spec.kind == ExperimentKind::Passivity)
        decisions["verdict_rule"] =
            "requires-activity iff pooled |mean| > threshold * pooled SE with the same sign in "
            "every seed";
    return decisions;
}

json run_one_seed(const ExperimentSpec& spec, std::uint64_t seed) {
    SimConfig cfg = spec.sim;
    cfg.seed = seed;
    json entry;
    entry["seed"] = seed;

    switch (spec.kind) {
        case ExperimentKind::Exchange: {
            circuits::ExchangeOptions opts;
            opts.keep_trace = false;  // trace files are produced by run_experiment
            const auto run = circuits::run_exchange(spec.branch_a, spec.branch_b, cfg, opts);
            entry["flow_a_to_b"] = estimate_json(run.flow_a_to_b);
            entry["clamp_count"] = run.clamp_count;
            entry["predicted"] = predicted_exchange_flow(spec.branch_a, spec.branch_b, cfg);
            break;
        }
        case ExperimentKind::Rectify: {
            circuits::RectifierOptions opts;
            opts.keep_trace = false;  // trace files are produced by run_experiment
            const auto run =
                circuits::run_rectifier_cell(spec.memristor, spec.shunt, spec.capacitor, cfg, opts);
            entry["dc_voltage_mean"] = run.dc_voltage_mean;
            entry["dc_voltage_se"] = run.dc_voltage_se;
            entry["capacitor_final_voltage"] = run.capacitor_final_voltage;
            entry["clamp_count"] = run.clamp_count;
            entry["n_blocks"] = run.n_blocks;
            entry["block_length"] = run.block_length;
            entry["burn_in_discarded"] = run.burn_in_discarded;
            break;
        }
        case ExperimentKind::Cascade: {
            const auto run = circuits::run_cascade(spec.n_stages, spec.memristor, spec.shunt,
                                                   spec.capacitor, cfg);
            entry["n_stages"] = run.n_stages;
            entry["per_stage_dc"] = run.per_stage_dc;
            entry["per_stage_se"] = run.per_stage_se;
            entry["total_dc_mean"] = run.total_dc_mean;
            entry["total_dc_se"] = run.total_dc_se;
            entry["available_power_estimate"] = run.available_power_estimate;
            entry["clamp_count"] = run.clamp_count;
            break;
        }
        case ExperimentKind::FdtCheck: {
            const auto report = audit::check_fdt_compliance(spec.branch, cfg);
            entry["pass"] = report.pass;
            entry["fdt_device"] = report.fdt_device;
            entry["measured_psd_level"] = report.measured_psd_level;
            entry["reference"] = report.reference;
            entry["note"] = report.note;
            break;
        }
        case ExperimentKind::IdealDrive: {
            const auto drive = noise::synthesize_bandlimited_gaussian(
                cfg, spec.drive_psd_level, noise::SourceRole::CurrentSource, 0);
            const auto run = circuits::run_ideal_drive(spec.memristor, drive, cfg);
            entry["mean_voltage"] = run.mean_voltage;
            entry["standard_error"] = run.standard_error;
            entry["n_blocks"] = run.n_blocks;
            entry["block_length"] = run.block_length;
            entry["burn_in_discarded"] = run.burn_in_discarded;
            break;
        }
        case ExperimentKind::Passivity:
            break;  // handled as a pooled run, not per seed
    }
    return entry;
}

}  // namespace

json run_to_json(const ExperimentSpec& spec, std::size_t workers) {
    spec.validate();

    json doc;
    doc["schema_version"] = 1;
    doc["kind"] = kind_name(spec.kind);
    doc["name"] = spec.name;
    doc["units"] = spec.units == UnitSystem::Si ? "si" : "normalized";
    doc["k_boltzmann"] = spec.sim.boltzmann_k;
    doc["config_hash"] = config_hash(spec);
    doc["spec"] = spec.to_json();
    doc["decisions"] = decisions_json(spec);
    doc["seeds"] = spec.seeds;

    if (spec.kind == ExperimentKind::Passivity) {
        SimConfig cfg = spec.sim;
        const auto verdict = audit::classify_passivity_with_seeds(
            spec.device, spec.bath_temperature, cfg, spec.seeds, spec.threshold);
        json v;
        v["classification"] = audit::classification_name(verdict.classification);
        v["z_score"] = verdict.z_score;
        v["threshold"] = verdict.threshold;
        v["sign_consistent"] = verdict.sign_consistent;
        v["pooled"] = estimate_json(verdict.pooled);
        json per_seed = json::array();
        for (std::size_t i = 0; i < verdict.per_seed.size(); ++i) {
            json e = estimate_json(verdict.per_seed[i]);
            e["seed"] = verdict.seeds[i];
            per_seed.push_back(std::move(e));
        }
        v["per_seed"] = std::move(per_seed);
        v["testbench"] = verdict.testbench;
        v["definition"] = verdict.definition;
        v["clamp_count"] = verdict.clamp_count;
        doc["verdict"] = std::move(v);
        doc["results"] = json::array();
        return doc;
    }

    std::vector<json> entries(spec.seeds.size());
    parallel_for(spec.seeds.size(), workers,
                 [&](std::size_t i) { entries[i] = run_one_seed(spec, spec.seeds[i]); });

    json results = json::array();
    for (auto& entry : entries) results.push_back(std::move(entry));
    doc["results"] = std::move(results);
    return doc;
}

RunOutcome run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir,
                          std::size_t workers) {
    namespace fs = std::filesystem;
    const auto started = std::chrono::system_clock::now();
    const auto tick = std::chrono::steady_clock::now();

    RunOutcome outcome;
    outcome.result = run_to_json(spec, workers);

    fs::create_directories(out_dir);
    const fs::path result_path = out_dir / (spec.name + ".json");
    io::write_file_atomic(result_path, outcome.result.dump(2) + "\n");
    outcome.files_written.push_back(result_path);

    // Optional per-seed artifacts. Records are re-synthesized with the same
    // (config, psd, role, stream), so the dump is bit-identical to what the
    // testbench consumed.
    for (const std::uint64_t seed : spec.seeds) {
        SimConfig cfg = spec.sim;
        cfg.seed = seed;
        const std::string stem = spec.name + ".seed" + std::to_string(seed);

        if (spec.output.traces && spec.kind == ExperimentKind::Exchange) {
            circuits::ExchangeOptions opts;
            opts.keep_trace = true;
            opts.trace_decimation = spec.output.trace_decimation;
            const auto run = circuits::run_exchange(spec.branch_a, spec.branch_b, cfg, opts);
            const fs::path trace_path = out_dir / (stem + ".trace.csv");
            io::write_trace_csv(run.trace, cfg.dt(), trace_path);
            outcome.files_written.push_back(trace_path);
        }
        if (spec.output.traces && spec.kind == ExperimentKind::Rectify) {
            circuits::RectifierOptions opts;
            opts.keep_trace = true;
            opts.trace_decimation = spec.output.trace_decimation;
            const auto run =
                circuits::run_rectifier_cell(spec.memristor, spec.shunt, spec.capacitor, cfg, opts);
            const fs::path trace_path = out_dir / (stem + ".trace.csv");
            io::write_trace_csv(run.trace, cfg.dt(), trace_path);
            outcome.files_written.push_back(trace_path);
        }

        if (spec.output.dump_records) {
            auto dump = [&](const circuits::BranchSpec& branch, std::uint64_t stream,
                            const std::string& label) {
                if (!branch.has_noise_source()) return;
                const double psd = audit::fdt_reference_psd(branch.resistor.resistance,
                                                            branch.resistor.temperature,
                                                            cfg.boltzmann_k);
                const auto rec = noise::synthesize_bandlimited_gaussian(
                    cfg, psd, noise::SourceRole::VoltageSource, stream);
                const fs::path raw_path = out_dir / (stem + "." + label + ".f64");
                io::write_record_raw(rec, seed, stream, raw_path);
                const fs::path csv_path = out_dir / (stem + "." + label + ".csv");
                io::write_record_csv(rec, csv_path);
                outcome.files_written.push_back(raw_path);
                outcome.files_written.push_back(csv_path);
            };
            switch (spec.kind) {
                case ExperimentKind::Exchange:
                    dump(spec.branch_a, 0, "branch_a");
                    dump(spec.branch_b, 1, "branch_b");
                    break;
                case ExperimentKind::FdtCheck:
                    dump(spec.branch, 0, "branch");
                    break;
                case ExperimentKind::Rectify:
                case ExperimentKind::Cascade: {
                    const double psd = audit::fdt_reference_psd(
                        1.0 / spec.shunt.resistance, spec.shunt.temperature, cfg.boltzmann_k);
                    const auto rec = noise::synthesize_bandlimited_gaussian(
                        cfg, psd, noise::SourceRole::CurrentSource, 0);
                    const fs::path raw_path = out_dir / (stem + ".drive.f64");
                    io::write_record_raw(rec, seed, 0, raw_path);
                    outcome.files_written.push_back(raw_path);
                    break;
                }
                case ExperimentKind::IdealDrive: {
                    const auto rec = noise::synthesize_bandlimited_gaussian(
                        cfg, spec.drive_psd_level, noise::SourceRole::CurrentSource, 0);
                    const fs::path raw_path = out_dir / (stem + ".drive.f64");
                    io::write_record_raw(rec, seed, 0, raw_path);
                    outcome.files_written.push_back(raw_path);
                    break;
                }
                case ExperimentKind::Passivity:
                    break;
            }
        }
    }

    const auto elapsed = std::chrono::steady_clock::now() - tick;
    json meta;
    meta["started_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  started.time_since_epoch())
                                  .count();
    meta["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    meta["workers"] = workers;
    const fs::path meta_path = out_dir / (spec.name + ".meta.json");
    io::write_file_atomic(meta_path, meta.dump(2) + "\n");

    return outcome;
}

namespace {

void append_model_curve(const json& model, const std::string& stem,
                        const std::filesystem::path& out_dir, double q_min, double q_max,
                        std::size_t q_points, std::vector<std::filesystem::path>& written) {
    elements::PolynomialMemristorModel m;
    m.a = model.at("a").get<double>();
    m.b = model.at("b").get<double>();
    m.c = model.at("c").get<double>();
    std::string csv = "q,flux,memristance\n";
    for (std::size_t i = 0; i < q_points; ++i) {
        const double q =
            q_min + (q_max - q_min) * static_cast<double>(i) /
                        static_cast<double>(q_points > 1 ? q_points - 1 : 1);
        csv += io::format_double(q);
        csv += ',';
        csv += io::format_double(elements::flux(m, q));
        csv += ',';
        csv += io::format_double(elements::memristance(m, q));
        csv += '\n';
    }
    const auto path = out_dir / (stem + "_model_curve.csv");
    io::write_file_atomic(path, csv);
    written.push_back(path);
}

}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& result_dir,
                                                  const std::filesystem::path& out_dir,
                                                  double q_min, double q_max,
                                                  std::size_t q_points) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(result_dir))
        throw ArgumentError("plot: result directory does not exist: " + result_dir.string());

    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(result_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& path = entry.path();
        if (path.extension() != ".json") continue;
        if (path.string().ends_with(".meta.json")) continue;
        if (path.string().ends_with(".f64.json")) continue;  // raw-record sidecars
        inputs.push_back(path);
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw ArgumentError("plot: no result files in " + result_dir.string());

    struct ExchangeRow {
        double dT, ta, tb;
        std::uint64_t seed;
        double measured, se;
        json predicted;
    };
    std::vector<ExchangeRow> exchange_rows;
    struct CascadeRow {
        std::size_t n;
        std::uint64_t seed;
        double total, se, power;
    };
    std::vector<CascadeRow> cascade_rows;
    std::vector<fs::path> written;

    fs::create_directories(out_dir);

    for (const auto& path : inputs) {
        std::ifstream in(path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ArgumentError("plot: corrupt result file " + path.string() + ": " + e.what());
        }
        if (!doc.is_object() || !doc.contains("kind") || !doc.contains("spec")) continue;
        const std::string kind = doc.at("kind").get<std::string>();
        const json& spec = doc.at("spec");

        // Flux/memristance curves for every configured memristor model.
        const std::string stem = path.stem().string();
        if (spec.contains("memristor"))
            append_model_curve(spec.at("memristor"), stem, out_dir, q_min, q_max, q_points,
                               written);
        for (const char* key : {"branch_a", "branch_b", "device", "branch"})
            if (spec.contains(key) && spec.at(key).value("kind", "") == "memristor")
                append_model_curve(spec.at(key), stem + "_" + key, out_dir, q_min, q_max,
                                   q_points, written);

        if (kind == "exchange") {
            const json& a = spec.at("branch_a");
            const json& b = spec.at("branch_b");
            const double ta = a.value("kind", "") == "resistor" ? a.at("T").get<double>() : 0.0;
            const double tb = b.value("kind", "") == "resistor" ? b.at("T").get<double>() : 0.0;
            for (const auto& entry : doc.at("results")) {
                ExchangeRow row;
                row.ta = ta;
                row.tb = tb;
                row.dT = ta - tb;
                row.seed = entry.at("seed").get<std::uint64_t>();
                row.measured = entry.at("flow_a_to_b").at("mean").get<double>();
                row.se = entry.at("flow_a_to_b").at("standard_error").get<double>();
                row.predicted = entry.value("predicted", json(nullptr));
                exchange_rows.push_back(std::move(row));
            }
        } else if (kind == "cascade") {
            for (const auto& entry : doc.at("results")) {
                cascade_rows.push_back({entry.at("n_stages").get<std::size_t>(),
                                        entry.at("seed").get<std::uint64_t>(),
                                        entry.at("total_dc_mean").get<double>(),
                                        entry.at("total_dc_se").get<double>(),
                                        entry.at("available_power_estimate").get<double>()});
            }
        }
    }

    if (!exchange_rows.empty()) {
        std::sort(exchange_rows.begin(), exchange_rows.end(), [](const auto& x, const auto& y) {
            return std::tie(x.dT, x.ta, x.seed) < std::tie(y.dT, y.ta, y.seed);
        });
        std::string csv = "dT,T_a,T_b,seed,measured_flow,standard_error,predicted_flow\n";
        for (const auto& row : exchange_rows) {
            csv += io::format_double(row.dT);
            csv += ',';
            csv += io::format_double(row.ta);
            csv += ',';
            csv += io::format_double(row.tb);
            csv += ',';
            csv += std::to_string(row.seed);
            csv += ',';
            csv += io::format_double(row.measured);
            csv += ',';
            csv += io::format_double(row.se);
            csv += ',';
            csv += row.predicted.is_null() ? "" : io::format_double(row.predicted.get<double>());
            csv += '\n';
        }
        const auto path = out_dir / "exchange_flow_vs_dT.csv";
        io::write_file_atomic(path, csv);
        written.push_back(path);
    }

    if (!cascade_rows.empty()) {
        std::sort(cascade_rows.begin(), cascade_rows.end(), [](const auto& x, const auto& y) {
            return std::tie(x.n, x.seed) < std::tie(y.n, y.seed);
        });
        std::string csv = "n_stages,seed,total_dc_mean,total_dc_se,available_power_estimate\n";
        for (const auto& row : cascade_rows) {
            csv += std::to_string(row.n);
            csv += ',';
            csv += std::to_string(row.seed);
            csv += ',';
            csv += io::format_double(row.total);
            csv += ',';
            csv += io::format_double(row.se);
            csv += ',';
            csv += io::format_double(row.power);
            csv += '\n';
        }
        const auto path = out_dir / "cascade_total_dc.csv";
        io::write_file_atomic(path, csv);
        written.push_back(path);
    }

    return written;
}

}  // namespace memnoise::experiment
