#include <doctest.h>

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "memnoise/config.hpp"
#include "memnoise/errors.hpp"
#include "memnoise/noise.hpp"
#include "memnoise/stats.hpp"

using namespace memnoise;
using noise::NoiseRecord;
using noise::SourceRole;
using noise::Window;

namespace {

SimConfig desk_config(std::size_t n, std::uint64_t seed) {
    SimConfig cfg;
    cfg.sample_rate = 1.0;
    cfg.band_low = 0.05;
    cfg.band_high = 0.45;
    cfg.n_samples = n;
    cfg.seed = seed;
    return cfg;
}

double sample_variance(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

TEST_CASE("zero psd gives an exactly zero record") {
    const auto rec = noise::synthesize_bandlimited_gaussian(desk_config(1 << 12, 5), 0.0,
                                                            SourceRole::VoltageSource);
    for (double v : rec.samples) CHECK(v == 0.0);

    const auto est = noise::estimate_psd(rec, 4, Window::Hann);
    for (double p : est.psd_values) CHECK(p == 0.0);
}

TEST_CASE("synthesis is deterministic and stream-separated") {
    const auto cfg = desk_config(1 << 12, 99);
    const auto a = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource, 0);
    const auto b = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource, 0);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);

    const auto c = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource, 1);
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i] == c.samples[i]) ++same;
    CHECK(same == 0);
}

TEST_CASE("record mean is zero to rounding and variance obeys parseval") {
    // Variance target: psd * (band_high - band_low) = 4 * 0.4 = 1.6, within 1%.
    const auto cfg = desk_config(1 << 20, 7);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource);

    double mean = 0.0;
    for (double v : rec.samples) mean += v;
    mean /= static_cast<double>(rec.samples.size());
    CHECK(std::abs(mean) < 1e-12);

    const double variance = sample_variance(rec.samples);
    CHECK(variance == doctest::Approx(1.6).epsilon(0.01));
}

TEST_CASE("estimated in-band psd matches the synthesis level") {
    const auto cfg = desk_config(1 << 20, 11);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource);
    const auto est = noise::estimate_psd(rec, 64, Window::Hann);
    const double in_band = noise::in_band_mean(est, cfg.band_low, cfg.band_high);
    CHECK(in_band == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("out-of-band power vanishes at synthesis resolution") {
    const auto cfg = desk_config(1 << 18, 13);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource);
    // Single-segment rectangular periodogram sits on the synthesis grid, where
    // every out-of-band coefficient is zero by construction.
    const auto est = noise::estimate_psd(rec, 1, Window::Rectangular);
    const double in_band = noise::in_band_mean(est, cfg.band_low, cfg.band_high);
    const double out = noise::out_of_band_max(est, cfg.band_low, cfg.band_high, 1);
    CHECK(out < 1e-6 * in_band);
}

TEST_CASE("psd estimate is nonnegative and integrates to the record power") {
    const auto cfg = desk_config(1 << 16, 17);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 2.5, SourceRole::CurrentSource);
    for (auto window : {Window::Rectangular, Window::Hann}) {
        const auto est = noise::estimate_psd(rec, 16, window);
        for (double p : est.psd_values) CHECK(p >= 0.0);
        const double integral = noise::integrated_power(est);
        const double variance = sample_variance(rec.samples);
        CHECK(integral == doctest::Approx(variance).epsilon(0.05));
    }
}

TEST_CASE("sinusoid at a bin center shows its analytic peak power") {
    // Integrated spectral peak of A*sin is A^2/2.
    const std::size_t n = 1 << 16;
    const std::size_t segments = 16;
    const std::size_t m = n / segments;
    const double amplitude = 1.5;
    const double f0 = 100.0 / static_cast<double>(m);  // segment-bin center

    NoiseRecord rec;
    rec.dt = 1.0;
    rec.band_low = 0.05;
    rec.band_high = 0.45;
    rec.role = SourceRole::VoltageSource;
    rec.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rec.samples[i] =
            amplitude * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(i));

    const auto est = noise::estimate_psd(rec, segments, Window::Hann);
    const double df = est.frequency_bins[1] - est.frequency_bins[0];
    double peak_power = 0.0;
    for (std::size_t k = 0; k < est.frequency_bins.size(); ++k)
        if (std::abs(est.frequency_bins[k] - f0) <= 8.0 * df)
            peak_power += est.psd_values[k] * df;
    CHECK(peak_power == doctest::Approx(amplitude * amplitude / 2.0).epsilon(0.02));
}

TEST_CASE("record statistics on trivial records") {
    NoiseRecord zeros;
    zeros.dt = 1.0;
    zeros.band_low = 0.05;
    zeros.band_high = 0.45;
    zeros.samples.assign(4096, 0.0);
    const auto zs = noise::record_statistics(zeros);
    CHECK(zs.mean == 0.0);
    CHECK(zs.variance == 0.0);
    CHECK(zs.se_of_mean == 0.0);

    NoiseRecord constant = zeros;
    constant.samples.assign(4096, 2.0);
    const auto cs = noise::record_statistics(constant);
    CHECK(cs.mean == 2.0);
    CHECK(cs.variance == 0.0);
    CHECK(cs.se_of_mean == 0.0);
}

TEST_CASE("record statistics reproduce the parseval variance") {
    const auto cfg = desk_config(1 << 20, 23);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource);
    const auto st = noise::record_statistics(rec);
    CHECK(st.variance == doctest::Approx(1.6).epsilon(0.01));
    CHECK(st.n_blocks >= 32);
    CHECK(st.block_length >= 200);  // 10/band_low at unit rate
}

TEST_CASE("samples are gaussian: excess kurtosis within five block SEs") {
    const auto cfg = desk_config(1 << 20, 29);
    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 4.0, SourceRole::VoltageSource);

    const double overall = excess_kurtosis(rec.samples);

    const std::size_t n_blocks = 64;
    const std::size_t block = rec.samples.size() / n_blocks;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const double k = excess_kurtosis(
            std::span<const double>(rec.samples.data() + b * block, block));
        sum += k;
        sumsq += k * k;
    }
    const double mean_blocks = sum / static_cast<double>(n_blocks);
    const double var_blocks =
        (sumsq - static_cast<double>(n_blocks) * mean_blocks * mean_blocks) /
        static_cast<double>(n_blocks - 1);
    const double se = std::sqrt(var_blocks / static_cast<double>(n_blocks));
    CHECK(std::abs(overall) <= 5.0 * se);
}

TEST_CASE("standard error halves when the record quadruples") {
    const auto short_rec = noise::synthesize_bandlimited_gaussian(desk_config(1 << 16, 31), 4.0,
                                                                  SourceRole::VoltageSource);
    const auto long_rec = noise::synthesize_bandlimited_gaussian(desk_config(1 << 18, 37), 4.0,
                                                                 SourceRole::VoltageSource);
    const double ratio = noise::record_statistics(short_rec).se_of_mean /
                         noise::record_statistics(long_rec).se_of_mean;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("rate refinement reproduces the same waveform sampled finer") {
    // (fs, n) -> (2fs, 2n) keeps the bin grid, so the same seed must give the
    // identical band-limited waveform; coincident samples agree to rounding.
    auto base_cfg = desk_config(1 << 14, 41);
    auto fine_cfg = base_cfg;
    fine_cfg.sample_rate *= 2.0;
    fine_cfg.n_samples *= 2;

    const auto base =
        noise::synthesize_bandlimited_gaussian(base_cfg, 4.0, SourceRole::CurrentSource);
    const auto fine =
        noise::synthesize_bandlimited_gaussian(fine_cfg, 4.0, SourceRole::CurrentSource);

    double rms = 0.0;
    for (double v : base.samples) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(base.samples.size()));

    for (std::size_t i = 0; i < base.samples.size(); ++i)
        CHECK(std::abs(fine.samples[2 * i] - base.samples[i]) < 1e-9 * rms);
}

TEST_CASE("configuration and argument errors") {
    auto cfg = desk_config(1 << 12, 1);

    auto bad_band = cfg;
    bad_band.band_low = 0.3;
    bad_band.band_high = 0.2;
    CHECK_THROWS_AS(noise::synthesize_bandlimited_gaussian(bad_band, 1.0,
                                                           SourceRole::VoltageSource),
                    ConfigError);

    auto above_nyquist = cfg;
    above_nyquist.band_high = 0.6;
    CHECK_THROWS_AS(noise::synthesize_bandlimited_gaussian(above_nyquist, 1.0,
                                                           SourceRole::VoltageSource),
                    ConfigError);

    auto not_pow2 = cfg;
    not_pow2.n_samples = 1000;
    CHECK_THROWS_AS(noise::synthesize_bandlimited_gaussian(not_pow2, 1.0,
                                                           SourceRole::VoltageSource),
                    ConfigError);

    auto zero_low = cfg;
    zero_low.band_low = 0.0;
    CHECK_THROWS_AS(noise::synthesize_bandlimited_gaussian(zero_low, 1.0,
                                                           SourceRole::VoltageSource),
                    ConfigError);

    CHECK_THROWS_AS(noise::synthesize_bandlimited_gaussian(cfg, -1.0,
                                                           SourceRole::VoltageSource),
                    ArgumentError);

    const auto rec = noise::synthesize_bandlimited_gaussian(cfg, 1.0, SourceRole::VoltageSource);
    CHECK_THROWS_AS(noise::estimate_psd(rec, 3, Window::Hann), ArgumentError);       // not divisible
    CHECK_THROWS_AS(noise::estimate_psd(rec, 1 << 12, Window::Hann), ArgumentError); // too short

    NoiseRecord empty;
    CHECK_THROWS_AS(noise::record_statistics(empty), ArgumentError);
}
