#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "memnoise/config.hpp"
#include "memnoise/stats.hpp"

namespace memnoise::noise {

enum class SourceRole { VoltageSource, CurrentSource };

const char* role_name(SourceRole role);

/// A sampled real-valued waveform with the flat one-sided spectral density it
/// was synthesized to, in volts (voltage role) or amperes (current role).
struct NoiseRecord {
    std::vector<double> samples;
    double dt = 1.0;
    double band_low = 0.0;
    double band_high = 0.0;
    double target_psd_level = 0.0;
    SourceRole role = SourceRole::VoltageSource;

    double sample_rate() const { return 1.0 / dt; }
    double duration() const { return dt * static_cast<double>(samples.size()); }
};

enum class Window { Rectangular, Hann };

const char* window_name(Window w);

/// Averaged one-sided periodogram.
struct PsdEstimate {
    std::vector<double> frequency_bins;
    std::vector<double> psd_values;
    std::size_t segment_count = 0;
    std::string window_name;
};

struct RecordStats {
    double mean = 0.0;
    double variance = 0.0;
    double se_of_mean = 0.0;
    std::size_t n_blocks = 0;
    std::size_t block_length = 0;
};

/// Synthesize a band-limited Gaussian record whose one-sided PSD equals
/// `psd_level` on [band_low, band_high] and is zero outside.
///
/// Construction: independent complex Gaussian coefficients of the variance
/// that makes the expected periodogram exactly flat are placed on the in-band
/// bins of the record's own frequency grid (Hermitian symmetry implied), all
/// other bins are zero, and the record is the inverse real transform. The
/// spectrum is therefore exactly banded, the samples are exactly Gaussian,
/// and the record mean is zero to rounding.
///
/// Coefficients are drawn in ascending physical-bin order, one Gaussian pair
/// per bin. Because the bin spacing fs/n is invariant under the refinement
/// (fs, n) -> (a*fs, a*n), such a refinement reproduces the same band-limited
/// waveform sampled more finely -- the basis of the oversampling-consistency
/// checks on the testbenches.
///
/// `stream_id` selects the RNG substream; distinct sources in one experiment
/// use distinct stream ids under the same seed.
NoiseRecord synthesize_bandlimited_gaussian(const SimConfig& config, double psd_level,
                                            SourceRole role, std::uint64_t stream_id = 0);

/// Averaged windowed periodogram over `n_segments` non-overlapping segments,
/// one-sided, with window power normalization so a flat spectrum is estimated
/// without bias.
PsdEstimate estimate_psd(const NoiseRecord& record, std::size_t n_segments, Window window);

/// Mean, unbiased variance, and block-means standard error of the mean.
RecordStats record_statistics(const NoiseRecord& record);

/// Mean of psd_values over bins with band_low <= f <= band_high.
double in_band_mean(const PsdEstimate& est, double band_low, double band_high);

/// Largest psd_value strictly outside [band_low, band_high], ignoring
/// `guard_bins` bins adjacent to each band edge.
double out_of_band_max(const PsdEstimate& est, double band_low, double band_high,
                       std::size_t guard_bins = 1);

/// Integral of psd_values (times bin width) over all bins.
double integrated_power(const PsdEstimate& est);

}  // namespace memnoise::noise
