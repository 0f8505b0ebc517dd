#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace memnoise {

/// Mean of a correlated series with a block-means standard error. Blocks are
/// long compared with the in-band correlation time, so block means are close
/// to independent and the usual SD-of-means estimator applies.
struct BlockEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t n_blocks = 0;
    std::size_t block_length = 0;
};

/// Power-flow estimate produced by the testbenches and consumed by the
/// passivity audit.
struct PowerFlowEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t n_blocks = 0;
    std::size_t block_length = 0;
    std::size_t burn_in_discarded = 0;
};

/// Block-means estimate over `xs`. If fewer than `min_blocks` whole blocks of
/// the requested length fit, the block length shrinks so that `min_blocks`
/// blocks (or as many as the data allows) are available. A trailing partial
/// block is discarded, so `mean` is the average over n_blocks*block_length
/// samples.
inline BlockEstimate block_mean_estimate(std::span<const double> xs,
                                         std::size_t block_length,
                                         std::size_t min_blocks = 32) {
    BlockEstimate est;
    const std::size_t n = xs.size();
    if (n == 0) return est;

    if (block_length < 1) block_length = 1;
    if (n / block_length < min_blocks) block_length = n / min_blocks;
    if (block_length < 1) block_length = 1;
    const std::size_t n_blocks = n / block_length;

    est.block_length = block_length;
    est.n_blocks = n_blocks;

    if (n_blocks == 0) return est;

    double grand = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        double s = 0.0;
        for (std::size_t i = b * block_length; i < (b + 1) * block_length; ++i) s += xs[i];
        grand += s / static_cast<double>(block_length);
    }
    est.mean = grand / static_cast<double>(n_blocks);

    if (n_blocks < 2) return est;

    double ss = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        double s = 0.0;
        for (std::size_t i = b * block_length; i < (b + 1) * block_length; ++i) s += xs[i];
        const double d = s / static_cast<double>(block_length) - est.mean;
        ss += d * d;
    }
    const double var_blocks = ss / static_cast<double>(n_blocks - 1);
    est.standard_error = std::sqrt(var_blocks / static_cast<double>(n_blocks));
    return est;
}

/// Streaming variant: accumulates block means without materializing the full
/// series. Feed samples in order, then call finish().
class BlockAccumulator {
public:
    explicit BlockAccumulator(std::size_t block_length)
        : block_length_(block_length < 1 ? 1 : block_length) {}

    void add(double x) {
        sum_ += x;
        if (++count_ == block_length_) {
            const double m = sum_ / static_cast<double>(block_length_);
            block_sum_ += m;
            block_sumsq_ += m * m;
            ++n_blocks_;
            sum_ = 0.0;
            count_ = 0;
        }
    }

    BlockEstimate finish() const {
        BlockEstimate est;
        est.block_length = block_length_;
        est.n_blocks = n_blocks_;
        if (n_blocks_ == 0) return est;
        const double nb = static_cast<double>(n_blocks_);
        est.mean = block_sum_ / nb;
        if (n_blocks_ >= 2) {
            double ss = block_sumsq_ - nb * est.mean * est.mean;
            if (ss < 0.0) ss = 0.0;
            est.standard_error = std::sqrt(ss / (nb - 1.0) / nb);
        }
        return est;
    }

private:
    std::size_t block_length_;
    std::size_t count_ = 0;
    double sum_ = 0.0;
    double block_sum_ = 0.0;
    double block_sumsq_ = 0.0;
    std::size_t n_blocks_ = 0;
};

/// Excess kurtosis (fourth standardized moment minus 3).
inline double excess_kurtosis(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

}  // namespace memnoise
