#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "memnoise/config.hpp"
#include "memnoise/elements.hpp"
#include "memnoise/noise.hpp"
#include "memnoise/stats.hpp"

namespace memnoise::circuits {

enum class BranchKind { ThermalResistor, Memristor };

/// One two-terminal branch of a testbench. A noisy thermal resistor carries
/// its own noise source (voltage PSD 4*k*T*R); memristors and noise-free
/// resistors carry none -- that contrast is the whole experiment.
struct BranchSpec {
    BranchKind kind = BranchKind::ThermalResistor;
    elements::ThermalResistor resistor;
    elements::PolynomialMemristorModel memristor;

    static BranchSpec thermal_resistor(double resistance, double temperature, bool noisy) {
        BranchSpec b;
        b.kind = BranchKind::ThermalResistor;
        b.resistor = {resistance, temperature, noisy};
        return b;
    }

    static BranchSpec memristor_branch(const elements::PolynomialMemristorModel& model) {
        BranchSpec b;
        b.kind = BranchKind::Memristor;
        b.memristor = model;
        return b;
    }

    bool is_memristor() const { return kind == BranchKind::Memristor; }
    bool has_noise_source() const {
        return kind == BranchKind::ThermalResistor && resistor.noisy;
    }
    /// Small-signal resistance: R, or M(q0) for memristors.
    double small_signal_resistance() const;
    /// Validates parameters; memristor branches must be admissible.
    void validate() const;
    std::string describe() const;
};

/// Decimated per-sample channels for plotting and bookkeeping checks.
/// Statistics are always computed at full rate before decimation. `charge`
/// tracks the memristor branch (branch b when both branches are memristors).
struct CircuitTrace {
    std::size_t decimation = 16;
    std::vector<double> current;
    std::vector<double> node_voltage;
    std::vector<double> charge;
    std::vector<double> power_a;
    std::vector<double> power_b;
};

struct ExchangeOptions {
    std::size_t trace_decimation = 16;
    bool keep_trace = true;
};

struct ExchangeResult {
    PowerFlowEstimate flow_a_to_b;  // net power into branch b
    CircuitTrace trace;
    unsigned long long clamp_count = 0;
};

struct RectifierOptions {
    std::size_t trace_decimation = 16;
    bool keep_trace = false;
    std::uint64_t noise_stream = 0;
};

struct RectifierResult {
    double dc_voltage_mean = 0.0;
    double dc_voltage_se = 0.0;
    double capacitor_final_voltage = 0.0;
    unsigned long long clamp_count = 0;
    std::size_t n_blocks = 0;
    std::size_t block_length = 0;
    std::size_t burn_in_discarded = 0;
    SimConfig config;  // echo of the run parameters
    CircuitTrace trace;
};

struct CascadeResult {
    std::vector<double> per_stage_dc;
    std::vector<double> per_stage_se;
    double total_dc_mean = 0.0;
    double total_dc_se = 0.0;
    double available_power_estimate = 0.0;
    std::size_t n_stages = 0;
    unsigned long long clamp_count = 0;
};

struct IdealDriveResult {
    double mean_voltage = 0.0;
    double standard_error = 0.0;
    std::size_t n_blocks = 0;
    std::size_t block_length = 0;
    std::size_t burn_in_discarded = 0;
};

/// Two-branch exchange loop: branches a and b in parallel, each a noisy
/// resistor or a (noise-free) memristor. The loop current is
/// I = (u_a - u_b)/(R_a + R_b) with u_* the branch noise voltages (zero for
/// noiseless branches) and R_* the resistance or clamped memristance.
/// Memristor charge advances by the trapezoidal rule. The returned estimate
/// is the burn-in-trimmed time average of the power entering branch b's
/// terminals (dissipation in b minus the power b's own source injects);
/// for two noisy resistors its expectation is the k*(T_a - T_b)*bandwidth
/// exchange law. Branch a draws RNG substream 0, branch b substream 1.
ExchangeResult run_exchange(const BranchSpec& branch_a, const BranchSpec& branch_b,
                            const SimConfig& config, const ExchangeOptions& options = {});

/// Rectifier cell: Norton noise current source (one-sided PSD 4*k*T/R) in
/// parallel with the shunt conductance 1/R, the memristor, and the capacitor,
/// all sharing one node voltage V:
///     C dV/dt = i_n(t) - V/R - V/M(q),   dq/dt = V/M(q).
/// Fixed-step integration at the record rate; the node equation is solved
/// implicitly (trapezoidal) with the memristor conductance evaluated at the
/// current charge. Returns the burn-in-trimmed mean of V with block-means SE.
/// The capacitor cutoff must sit at least a decade below band_low so the
/// mean of V is a true DC readout.
RectifierResult run_rectifier_cell(const elements::PolynomialMemristorModel& model,
                                   const elements::ThermalResistor& shunt,
                                   const elements::Capacitor& cap, const SimConfig& config,
                                   const RectifierOptions& options = {});

/// n_stages independent rectifier cells (RNG substream = stage index), summed
/// as a series stack. Available power uses the matched-load convention with
/// R_out equal to the shunt resistance: total_dc^2 / (4 * n_stages * R_out).
CascadeResult run_cascade(std::size_t n_stages,
                          const elements::PolynomialMemristorModel& model,
                          const elements::ThermalResistor& shunt, const elements::Capacitor& cap,
                          const SimConfig& config);

/// Memristor driven directly by an ideal current record: q integrates the
/// drive, the voltage is M(q)*I. Kept separate from the rectifier cell on
/// purpose: with an ideal zero-mean Gaussian drive the mean voltage vanishes
/// identically, so any DC a self-consistent cell shows must come from
/// source-impedance feedback, not from the device alone.
IdealDriveResult run_ideal_drive(const elements::PolynomialMemristorModel& model,
                                 const noise::NoiseRecord& drive, const SimConfig& config);

}  // namespace memnoise::circuits
