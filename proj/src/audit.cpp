#include "memnoise/audit.hpp"

#include <cmath>

#include "memnoise/noise.hpp"
#include "memnoise/rng.hpp"

namespace memnoise::audit {

const char* classification_name(Classification c) {
    return c == Classification::PassiveConsistent ? "passive-consistent" : "requires-activity";
}

const char* const passivity_definition =
    "Decision rule: take the device's noise-free response characteristics as given and embed "
    "them among passive thermal elements in equilibrium at the bath temperature. If the model "
    "sustains a steady, sign-stable net power flow (pooled |mean| > threshold standard errors, "
    "same sign in every replicate), a device behaving this way without an external energy "
    "source would steadily reduce entropy in an isolated equilibrium system; the model is "
    "classified requires-activity. Otherwise it is passive-consistent: a finite run can refute "
    "passivity, never prove it.";

FdtComplianceReport check_fdt_compliance(const circuits::BranchSpec& branch,
                                         const SimConfig& config) {
    config.validate();
    branch.validate();

    FdtComplianceReport report;
    report.fdt_device = branch.has_noise_source();

    double twin_temperature = 1.0;  // unit temperature in the configured units
    if (!branch.is_memristor()) twin_temperature = branch.resistor.temperature;
    const double resistance = branch.small_signal_resistance();
    report.reference = fdt_reference_psd(resistance, twin_temperature, config.boltzmann_k);

    double level = 0.0;
    if (branch.has_noise_source())
        level = fdt_reference_psd(branch.resistor.resistance, branch.resistor.temperature,
                                  config.boltzmann_k);
    const auto record = noise::synthesize_bandlimited_gaussian(
        config, level, noise::SourceRole::VoltageSource, 0);
    const auto est = noise::estimate_psd(record, 64, noise::Window::Hann);
    report.measured_psd_level = noise::in_band_mean(est, config.band_low, config.band_high);

    if (report.fdt_device) {
        if (report.reference == 0.0) {
            report.pass = report.measured_psd_level == 0.0;
            report.note = "zero-temperature branch: no thermal noise expected";
        } else {
            report.pass =
                std::abs(report.measured_psd_level - report.reference) <= 0.03 * report.reference;
            report.note = "noisy branch measured against 4*k*T*R";
        }
    } else {
        report.pass = report.reference == 0.0
                          ? report.measured_psd_level == 0.0
                          : report.measured_psd_level < 1e-6 * report.reference;
        report.note = "non-FDT device: noise-free by model, measured against a noisy twin";
    }
    return report;
}

PassivityVerdict classify_passivity_with_seeds(const circuits::BranchSpec& device,
                                               double bath_temperature, const SimConfig& config,
                                               std::span<const std::uint64_t> seeds,
                                               double threshold) {
    if (seeds.size() < 3)
        throw ArgumentError("classify_passivity: at least 3 seeds are required for a verdict");
    if (!(bath_temperature >= 0.0))
        throw ArgumentError("classify_passivity: bath temperature must be nonnegative");
    device.validate();

    const double r_ref = device.small_signal_resistance();
    if (!(r_ref > 0.0))
        throw ArgumentError(
            "classify_passivity: device small-signal resistance at q0 must be positive");

    const auto reference =
        circuits::BranchSpec::thermal_resistor(r_ref, bath_temperature, true);

    PassivityVerdict verdict;
    verdict.threshold = threshold;
    verdict.definition = passivity_definition;
    verdict.testbench = "two-branch exchange loop: reference " + reference.describe() +
                        " vs device " + device.describe() + "; mean power measured into device";
    verdict.seeds.assign(seeds.begin(), seeds.end());

    circuits::ExchangeOptions opts;
    opts.keep_trace = false;

    double mean_sum = 0.0;
    double var_sum = 0.0;
    bool all_positive = true, all_negative = true;
    for (const std::uint64_t seed : seeds) {
        SimConfig run_cfg = config;
        run_cfg.seed = seed;
        const auto run = circuits::run_exchange(reference, device, run_cfg, opts);
        if (run.flow_a_to_b.n_blocks < 32)
            throw ArgumentError(
                "classify_passivity: record too short for a verdict (need >= 32 blocks)");
        verdict.per_seed.push_back(run.flow_a_to_b);
        verdict.clamp_count += run.clamp_count;
        mean_sum += run.flow_a_to_b.mean;
        var_sum += run.flow_a_to_b.standard_error * run.flow_a_to_b.standard_error;
        all_positive = all_positive && run.flow_a_to_b.mean > 0.0;
        all_negative = all_negative && run.flow_a_to_b.mean < 0.0;
    }

    const double n = static_cast<double>(seeds.size());
    verdict.pooled.mean = mean_sum / n;
    verdict.pooled.standard_error = std::sqrt(var_sum) / n;
    verdict.pooled.n_blocks = verdict.per_seed.front().n_blocks;
    verdict.pooled.block_length = verdict.per_seed.front().block_length;
    verdict.pooled.burn_in_discarded = verdict.per_seed.front().burn_in_discarded;

    verdict.sign_consistent = all_positive || all_negative;
    verdict.z_score = verdict.pooled.standard_error > 0.0
                          ? std::abs(verdict.pooled.mean) / verdict.pooled.standard_error
                          : 0.0;
    verdict.classification =
        (verdict.z_score > threshold && verdict.sign_consistent)
            ? Classification::RequiresActivity
            : Classification::PassiveConsistent;
    return verdict;
}

PassivityVerdict classify_passivity(const circuits::BranchSpec& device, double bath_temperature,
                                    const SimConfig& config, std::size_t n_seeds,
                                    double threshold) {
    std::vector<std::uint64_t> seeds(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i) seeds[i] = derive_seed(config.seed, i);
    return classify_passivity_with_seeds(device, bath_temperature, config, seeds, threshold);
}

}  // namespace memnoise::audit
