#include "memnoise/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "memnoise/errors.hpp"
#include "memnoise/fft.hpp"
#include "memnoise/rng.hpp"

namespace memnoise::noise {

const char* role_name(SourceRole role) {
    return role == SourceRole::VoltageSource ? "voltage-source" : "current-source";
}

const char* window_name(Window w) {
    return w == Window::Rectangular ? "rectangular" : "hann";
}

namespace {

// In-band bin range [k_lo, k_hi] on the grid f_k = k*fs/n, inclusive at both
// edges. The small slack keeps edge frequencies that land on a bin boundary
// inside the band despite rounding in f/df.
void band_bins(double fs, std::size_t n, double f_lo, double f_hi,
               std::size_t& k_lo, std::size_t& k_hi) {
    const double df = fs / static_cast<double>(n);
    const double slack = 1e-9;
    double lo = std::ceil(f_lo / df - slack);
    double hi = std::floor(f_hi / df + slack);
    if (lo < 1.0) lo = 1.0;
    if (hi > static_cast<double>(n / 2)) hi = static_cast<double>(n / 2);
    k_lo = static_cast<std::size_t>(lo);
    k_hi = static_cast<std::size_t>(hi);
}

std::vector<double> make_window(Window w, std::size_t m) {
    std::vector<double> win(m, 1.0);
    if (w == Window::Hann) {
        for (std::size_t j = 0; j < m; ++j)
            win[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                           static_cast<double>(j) / static_cast<double>(m)));
    }
    return win;
}

}  // namespace

NoiseRecord synthesize_bandlimited_gaussian(const SimConfig& config, double psd_level,
                                            SourceRole role, std::uint64_t stream_id) {
    config.validate();
    if (!(psd_level >= 0.0)) throw ArgumentError("psd_level must be nonnegative");

    const std::size_t n = config.n_samples;
    const double fs = config.sample_rate;

    NoiseRecord rec;
    rec.dt = 1.0 / fs;
    rec.band_low = config.band_low;
    rec.band_high = config.band_high;
    rec.target_psd_level = psd_level;
    rec.role = role;

    if (psd_level == 0.0) {
        rec.samples.assign(n, 0.0);
        return rec;
    }

    std::size_t k_lo = 0, k_hi = 0;
    band_bins(fs, n, config.band_low, config.band_high, k_lo, k_hi);
    if (k_lo > k_hi)
        throw ConfigError("band contains no frequency bins at this record length");

    // One-sided PSD S0 on bin k (0 < k < n/2) means E|X_k|^2 = S0*fs*n/2,
    // i.e. sigma = sqrt(S0*fs*n/4) per real/imaginary component. The Nyquist
    // bin carries no mirror image, so it is real with E X^2 = S0*fs*n.
    const double sigma =
        std::sqrt(psd_level * fs * static_cast<double>(n) / 4.0);

    std::vector<std::complex<double>> spectrum(n / 2 + 1, {0.0, 0.0});
    Xoshiro256pp rng(config.seed, stream_id);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        double g0 = 0.0, g1 = 0.0;
        rng.next_gaussian_pair(g0, g1);
        if (k == n / 2)
            spectrum[k] = {2.0 * sigma * g0, 0.0};
        else
            spectrum[k] = {sigma * g0, sigma * g1};
    }

    rec.samples = fft::real_inverse(spectrum, n);
    return rec;
}

PsdEstimate estimate_psd(const NoiseRecord& record, std::size_t n_segments, Window window) {
    const std::size_t n = record.samples.size();
    if (n_segments < 1) throw ArgumentError("n_segments must be at least 1");
    if (n == 0 || n % n_segments != 0)
        throw ArgumentError("record length must divide evenly into n_segments segments");
    const std::size_t m = n / n_segments;
    if (m < 2 || (m & (m - 1)) != 0)
        throw ArgumentError("record too short: segment length must be a power of two >= 2");

    const double fs = record.sample_rate();
    const auto win = make_window(window, m);
    double w2 = 0.0;
    for (double w : win) w2 += w * w;

    PsdEstimate est;
    est.segment_count = n_segments;
    est.window_name = window_name(window);
    est.frequency_bins.resize(m / 2 + 1);
    for (std::size_t k = 0; k <= m / 2; ++k)
        est.frequency_bins[k] = static_cast<double>(k) * fs / static_cast<double>(m);
    est.psd_values.assign(m / 2 + 1, 0.0);

    std::vector<double> seg(m);
    for (std::size_t s = 0; s < n_segments; ++s) {
        for (std::size_t j = 0; j < m; ++j) seg[j] = win[j] * record.samples[s * m + j];
        const auto spec = fft::real_forward(seg);
        for (std::size_t k = 0; k <= m / 2; ++k)
            est.psd_values[k] += std::norm(spec[k]);
    }

    // One-sided normalization with window power compensation; interior bins
    // are doubled, DC and Nyquist are not.
    const double base = 1.0 / (fs * w2 * static_cast<double>(n_segments));
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const double one_sided = (k == 0 || k == m / 2) ? 1.0 : 2.0;
        est.psd_values[k] *= base * one_sided;
    }
    return est;
}

RecordStats record_statistics(const NoiseRecord& record) {
    const std::size_t n = record.samples.size();
    if (n == 0) throw ArgumentError("record_statistics: empty record");

    RecordStats st;
    double sum = 0.0;
    for (double x : record.samples) sum += x;
    st.mean = sum / static_cast<double>(n);

    if (n > 1) {
        double ss = 0.0;
        for (double x : record.samples) {
            const double d = x - st.mean;
            ss += d * d;
        }
        st.variance = ss / static_cast<double>(n - 1);
    }

    const double fs = record.sample_rate();
    const std::size_t block_len_wanted = [&] {
        const double len = 10.0 * fs / std::max(record.band_low, 1e-300);
        auto b = static_cast<std::size_t>(len);
        if (static_cast<double>(b) < len) ++b;
        return std::max<std::size_t>(b, 1);
    }();

    const auto est = block_mean_estimate(record.samples, block_len_wanted);
    st.se_of_mean = est.standard_error;
    st.n_blocks = est.n_blocks;
    st.block_length = est.block_length;
    return st;
}

double in_band_mean(const PsdEstimate& est, double band_low, double band_high) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < est.frequency_bins.size(); ++k) {
        const double f = est.frequency_bins[k];
        if (f >= band_low && f <= band_high) {
            sum += est.psd_values[k];
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

double out_of_band_max(const PsdEstimate& est, double band_low, double band_high,
                       std::size_t guard_bins) {
    if (est.frequency_bins.size() < 2) return 0.0;
    const double df = est.frequency_bins[1] - est.frequency_bins[0];
    const double guard = static_cast<double>(guard_bins) * df;
    double max_val = 0.0;
    for (std::size_t k = 0; k < est.frequency_bins.size(); ++k) {
        const double f = est.frequency_bins[k];
        if (f < band_low - guard || f > band_high + guard)
            max_val = std::max(max_val, est.psd_values[k]);
    }
    return max_val;
}

double integrated_power(const PsdEstimate& est) {
    if (est.frequency_bins.size() < 2) return 0.0;
    const double df = est.frequency_bins[1] - est.frequency_bins[0];
    double sum = 0.0;
    for (double p : est.psd_values) sum += p;
    return sum * df;
}

}  // namespace memnoise::noise
