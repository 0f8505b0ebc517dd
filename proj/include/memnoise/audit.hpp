#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memnoise/circuits.hpp"
#include "memnoise/config.hpp"
#include "memnoise/reference.hpp"
#include "memnoise/stats.hpp"

namespace memnoise::audit {

struct FdtComplianceReport {
    bool pass = false;
    bool fdt_device = false;      // false flags a non-FDT (noise-free) device
    double measured_psd_level = 0.0;
    double reference = 0.0;       // 4*k*T*R for the branch, or its noisy twin
    std::string note;
};

/// Synthesizes the branch's open-circuit noise record, estimates its in-band
/// PSD (64-segment Hann average), and compares it to the closed-form
/// reference. A noisy branch passes if the estimate is within 3%. Noise-free
/// branches (memristors, noise-free resistors) must measure below 1e-6 of
/// the reference a noisy twin of equal resistance would have; they are
/// flagged as non-FDT devices either way. Memristor twins use unit
/// temperature in the configured units.
FdtComplianceReport check_fdt_compliance(const circuits::BranchSpec& branch,
                                         const SimConfig& config);

enum class Classification { PassiveConsistent, RequiresActivity };

const char* classification_name(Classification c);

/// The operational decision rule applied by classify_passivity, embedded in
/// every verdict so result files are self-describing.
extern const char* const passivity_definition;

struct PassivityVerdict {
    Classification classification = Classification::PassiveConsistent;
    double z_score = 0.0;
    double threshold = 5.0;
    bool sign_consistent = false;
    PowerFlowEstimate pooled;                   // mean power into the device
    std::vector<PowerFlowEstimate> per_seed;
    std::vector<std::uint64_t> seeds;
    std::string testbench;                      // evidence description
    std::string definition;
    unsigned long long clamp_count = 0;
};

/// Second-Law audit of a device model. The device is placed in the exchange
/// loop opposite a noisy reference resistor matched to the device's
/// small-signal resistance, at the bath temperature, once per seed. Estimates
/// are pooled; the verdict is requires-activity only when the pooled mean
/// power into the device exceeds `threshold` standard errors AND every seed
/// agrees on the sign. A steady flow in equilibrium is exactly the
/// entropy-reducing behaviour a passive device cannot show, so a physical
/// realization of such a model needs an external energy source.
///
/// "Passive-consistent" is deliberate: a finite run can refute passivity but
/// never prove it.
PassivityVerdict classify_passivity(const circuits::BranchSpec& device, double bath_temperature,
                                    const SimConfig& config, std::size_t n_seeds,
                                    double threshold = 5.0);

/// Same audit with an explicit seed schedule (used by the experiment runner).
PassivityVerdict classify_passivity_with_seeds(const circuits::BranchSpec& device,
                                               double bath_temperature, const SimConfig& config,
                                               std::span<const std::uint64_t> seeds,
                                               double threshold = 5.0);

}  // namespace memnoise::audit
