#include "memnoise/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "memnoise/reference.hpp"

namespace memnoise::circuits {

namespace {

std::size_t effective_block_length(std::size_t usable, std::size_t wanted,
                                   std::size_t min_blocks = 32) {
    std::size_t len = std::max<std::size_t>(wanted, 1);
    if (usable / len < min_blocks) len = std::max<std::size_t>(usable / min_blocks, 1);
    return len;
}

// Mutable per-branch state for the exchange loop.
struct BranchRuntime {
    bool is_memristor = false;
    double fixed_resistance = 0.0;
    const elements::PolynomialMemristorModel* model = nullptr;
    double q = 0.0;

    double resistance(unsigned long long& clamp_count) const {
        if (!is_memristor) return fixed_resistance;
        return elements::clamped_memristance(*model, q, clamp_count);
    }
    double resistance_at(double q_probe, unsigned long long& clamp_count) const {
        if (!is_memristor) return fixed_resistance;
        return elements::clamped_memristance(*model, q_probe, clamp_count);
    }
};

BranchRuntime make_runtime(const BranchSpec& spec) {
    BranchRuntime rt;
    if (spec.is_memristor()) {
        rt.is_memristor = true;
        rt.model = &spec.memristor;
        rt.q = spec.memristor.q0;
    } else {
        rt.fixed_resistance = spec.resistor.resistance;
    }
    return rt;
}

}  // namespace

double BranchSpec::small_signal_resistance() const {
    if (is_memristor()) return elements::memristance(memristor, memristor.q0);
    return resistor.resistance;
}

void BranchSpec::validate() const {
    if (is_memristor())
        elements::require_admissible(memristor);
    else
        resistor.validate();
}

std::string BranchSpec::describe() const {
    if (is_memristor()) {
        return "memristor(a=" + std::to_string(memristor.a) + ", b=" +
               std::to_string(memristor.b) + ", c=" + std::to_string(memristor.c) +
               ", q0=" + std::to_string(memristor.q0) + ")";
    }
    return std::string(resistor.noisy ? "noisy" : "noise-free") +
           " resistor(R=" + std::to_string(resistor.resistance) +
           ", T=" + std::to_string(resistor.temperature) + ")";
}

ExchangeResult run_exchange(const BranchSpec& branch_a, const BranchSpec& branch_b,
                            const SimConfig& config, const ExchangeOptions& options) {
    config.validate();
    branch_a.validate();
    branch_b.validate();

    const std::size_t n = config.n_samples;
    const double dt = config.dt();

    // Substreams are fixed by branch position, so toggling one branch's noise
    // on or off never changes the other branch's record.
    noise::NoiseRecord rec_a, rec_b;
    if (branch_a.has_noise_source()) {
        const double psd = audit::fdt_reference_psd(branch_a.resistor.resistance,
                                                    branch_a.resistor.temperature,
                                                    config.boltzmann_k);
        rec_a = noise::synthesize_bandlimited_gaussian(config, psd,
                                                       noise::SourceRole::VoltageSource, 0);
    }
    if (branch_b.has_noise_source()) {
        const double psd = audit::fdt_reference_psd(branch_b.resistor.resistance,
                                                    branch_b.resistor.temperature,
                                                    config.boltzmann_k);
        rec_b = noise::synthesize_bandlimited_gaussian(config, psd,
                                                       noise::SourceRole::VoltageSource, 1);
    }
    const auto u_a = [&](std::size_t k) { return rec_a.samples.empty() ? 0.0 : rec_a.samples[k]; };
    const auto u_b = [&](std::size_t k) { return rec_b.samples.empty() ? 0.0 : rec_b.samples[k]; };

    BranchRuntime rt_a = make_runtime(branch_a);
    BranchRuntime rt_b = make_runtime(branch_b);

    ExchangeResult result;
    result.trace.decimation = options.trace_decimation;

    const std::size_t burn_in = config.burn_in_samples();
    const std::size_t block_len =
        effective_block_length(n - burn_in, config.block_length());
    BlockAccumulator acc(block_len);

    unsigned long long clamps = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ra = rt_a.resistance(clamps);
        const double rb = rt_b.resistance(clamps);
        const double drive = u_a(k) - u_b(k);
        const double current = drive / (ra + rb);
        const double node_voltage = u_b(k) + rb * current;  // branch-b terminal voltage
        const double power_b = node_voltage * current;      // absorbed by branch b
        const double power_a = -power_b;                    // two-element loop

        if (k >= burn_in) acc.add(power_b);

        if (options.keep_trace && k % options.trace_decimation == 0) {
            result.trace.current.push_back(current);
            result.trace.node_voltage.push_back(node_voltage);
            result.trace.charge.push_back(rt_b.is_memristor ? rt_b.q : rt_a.q);
            result.trace.power_a.push_back(power_a);
            result.trace.power_b.push_back(power_b);
        }

        // Heun-type charge update for memristor branches: Euler predictor,
        // trapezoidal corrector against the next-sample loop equation. The
        // loop current enters branch b's positive terminal and leaves branch
        // a's, so branch a integrates the opposite sign.
        if (k + 1 < n && (rt_a.is_memristor || rt_b.is_memristor)) {
            const double qa_pred = rt_a.q - dt * current;
            const double qb_pred = rt_b.q + dt * current;
            const double ra_pred = rt_a.resistance_at(qa_pred, clamps);
            const double rb_pred = rt_b.resistance_at(qb_pred, clamps);
            const double next_current =
                (u_a(k + 1) - u_b(k + 1)) / (ra_pred + rb_pred);
            const double dq = dt * (current + next_current) / 2.0;
            if (rt_a.is_memristor) rt_a.q -= dq;
            if (rt_b.is_memristor) rt_b.q += dq;
        }
    }

    const BlockEstimate est = acc.finish();
    result.flow_a_to_b.mean = est.mean;
    result.flow_a_to_b.standard_error = est.standard_error;
    result.flow_a_to_b.n_blocks = est.n_blocks;
    result.flow_a_to_b.block_length = est.block_length;
    result.flow_a_to_b.burn_in_discarded = burn_in;
    result.clamp_count = clamps;
    return result;
}

RectifierResult run_rectifier_cell(const elements::PolynomialMemristorModel& model,
                                   const elements::ThermalResistor& shunt,
                                   const elements::Capacitor& cap, const SimConfig& config,
                                   const RectifierOptions& options) {
    config.validate();
    shunt.validate();
    cap.validate();
    elements::require_admissible(model);
    if (!(model.a > 0.0))
        throw ArgumentError("rectifier cell: memristor small-signal resistance a must be positive");
    if (!shunt.noisy)
        throw ArgumentError("rectifier cell: shunt resistor must be noisy (it is the only source)");

    const double cutoff =
        1.0 / (2.0 * std::numbers::pi * shunt.resistance * cap.capacitance);
    if (!(cutoff < config.band_low / 10.0))
        throw ConfigError("rectifier cell: capacitor cutoff 1/(2*pi*R*C) must sit at least a "
                          "decade below band_low for a DC readout");

    const std::size_t n = config.n_samples;
    const double dt = config.dt();
    const double r = shunt.resistance;
    const double c_over_dt = cap.capacitance / dt;

    // Norton form of the shunt's thermal noise: current PSD 4*k*T/R.
    const double psd_current = audit::fdt_reference_psd(1.0 / r, shunt.temperature,
                                                        config.boltzmann_k);
    const noise::NoiseRecord drive = noise::synthesize_bandlimited_gaussian(
        config, psd_current, noise::SourceRole::CurrentSource, options.noise_stream);

    RectifierResult result;
    result.config = config;
    result.trace.decimation = options.trace_decimation;

    const std::size_t burn_in = config.burn_in_samples();
    const std::size_t block_len =
        effective_block_length(n - burn_in, config.block_length());
    BlockAccumulator acc(block_len);

    unsigned long long clamps = 0;
    double v = cap.initial_voltage;
    double q = model.q0;

    for (std::size_t k = 0; k < n; ++k) {
        if (k >= burn_in) acc.add(v);

        const double g_mem = 1.0 / elements::clamped_memristance(model, q, clamps);
        if (options.keep_trace && k % options.trace_decimation == 0) {
            const double i_mem = v * g_mem;
            result.trace.current.push_back(i_mem);
            result.trace.node_voltage.push_back(v);
            result.trace.charge.push_back(q);
            result.trace.power_a.push_back(v * (v / r - drive.samples[k]));  // shunt + source
            result.trace.power_b.push_back(v * i_mem);                       // memristor
        }

        if (k + 1 == n) break;

        // Trapezoidal node update with the memristor conductance frozen at
        // the current charge; L-stability is not needed here because the
        // clamp keeps the conductance finite and the capacitor pole is slow.
        const double g_total = 1.0 / r + g_mem;
        const double drive_mid = 0.5 * (drive.samples[k] + drive.samples[k + 1]);
        const double v_next =
            ((c_over_dt - 0.5 * g_total) * v + drive_mid) / (c_over_dt + 0.5 * g_total);
        q += dt * 0.5 * (v * g_mem + v_next * g_mem);
        v = v_next;
    }

    const BlockEstimate est = acc.finish();
    result.dc_voltage_mean = est.mean;
    result.dc_voltage_se = est.standard_error;
    result.n_blocks = est.n_blocks;
    result.block_length = est.block_length;
    result.burn_in_discarded = burn_in;
    result.capacitor_final_voltage = v;
    result.clamp_count = clamps;
    return result;
}

CascadeResult run_cascade(std::size_t n_stages,
                          const elements::PolynomialMemristorModel& model,
                          const elements::ThermalResistor& shunt, const elements::Capacitor& cap,
                          const SimConfig& config) {
    if (n_stages < 1) throw ArgumentError("cascade: n_stages must be at least 1");

    CascadeResult result;
    result.n_stages = n_stages;
    result.per_stage_dc.reserve(n_stages);
    result.per_stage_se.reserve(n_stages);

    double total = 0.0;
    double var_sum = 0.0;
    for (std::size_t stage = 0; stage < n_stages; ++stage) {
        RectifierOptions opts;
        opts.keep_trace = false;
        opts.noise_stream = stage;  // stage 0 reproduces the single-cell run bit for bit
        const RectifierResult cell = run_rectifier_cell(model, shunt, cap, config, opts);
        result.per_stage_dc.push_back(cell.dc_voltage_mean);
        result.per_stage_se.push_back(cell.dc_voltage_se);
        result.clamp_count += cell.clamp_count;
        total += cell.dc_voltage_mean;  // series stack: voltages add
        var_sum += cell.dc_voltage_se * cell.dc_voltage_se;
    }
    result.total_dc_mean = total;
    result.total_dc_se = std::sqrt(var_sum);
    result.available_power_estimate =
        total * total /
        (4.0 * static_cast<double>(n_stages) * shunt.resistance);
    return result;
}

IdealDriveResult run_ideal_drive(const elements::PolynomialMemristorModel& model,
                                 const noise::NoiseRecord& drive, const SimConfig& config) {
    elements::require_admissible(model);
    if (drive.role != noise::SourceRole::CurrentSource)
        throw ArgumentError("ideal drive: record must have the current-source role");
    if (!(drive.band_low > 0.0))
        throw ArgumentError("ideal drive: record must be band-limited away from DC");

    const std::size_t n = drive.samples.size();
    if (n == 0) throw ArgumentError("ideal drive: empty record");

    const std::size_t burn_in =
        static_cast<std::size_t>(config.burn_in_fraction * static_cast<double>(n));
    const std::size_t wanted = [&] {
        const double len = 10.0 * drive.sample_rate() / drive.band_low;
        auto b = static_cast<std::size_t>(len);
        if (static_cast<double>(b) < len) ++b;
        return std::max<std::size_t>(b, 1);
    }();
    const std::size_t block_len = effective_block_length(n - burn_in, wanted);
    BlockAccumulator acc(block_len);

    elements::ElementState state{model.q0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double voltage = elements::memristor_voltage(model, state, drive.samples[k]);
        if (k >= burn_in) acc.add(voltage);
        if (k + 1 < n)
            state = elements::advance_charge(state, drive.samples[k], drive.samples[k + 1],
                                             drive.dt);
    }

    const BlockEstimate est = acc.finish();
    IdealDriveResult result;
    result.mean_voltage = est.mean;
    result.standard_error = est.standard_error;
    result.n_blocks = est.n_blocks;
    result.block_length = est.block_length;
    result.burn_in_discarded = burn_in;
    return result;
}

}  // namespace memnoise::circuits
