#include "memnoise/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace memnoise::fft {

namespace {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Twiddle table: tw[t] = exp(-2*pi*i*t/n) for t < n/2.
std::vector<std::complex<double>> twiddles(std::size_t n) {
    std::vector<std::complex<double>> tw(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t t = 0; t < n / 2; ++t) {
        const double a = step * static_cast<double>(t);
        tw[t] = {std::cos(a), std::sin(a)};
    }
    return tw;
}

void bit_reverse_permute(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

}  // namespace

void transform(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
    if (n == 1) return;

    const auto tw = twiddles(n);
    bit_reverse_permute(data);

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t block = 0; block < n; block += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = tw[j * stride];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = data[block + j];
                const std::complex<double> v = data[block + j + half] * w;
                data[block + j] = u + v;
                data[block + j + half] = u - v;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : data) z *= scale;
    }
}

std::vector<std::complex<double>> real_forward(std::span<const double> x) {
    const std::size_t n = x.size();
    if (!is_pow2(n) || n < 2)
        throw std::invalid_argument("real_forward size must be a power of two >= 2");
    const std::size_t half = n / 2;

    // Pack even/odd samples into a half-size complex transform.
    std::vector<std::complex<double>> z(half);
    for (std::size_t m = 0; m < half; ++m) z[m] = {x[2 * m], x[2 * m + 1]};
    transform(z, false);

    std::vector<std::complex<double>> out(half + 1);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k <= half; ++k) {
        const std::complex<double> zk = (k == half) ? z[0] : z[k];
        const std::complex<double> zmk = std::conj(z[(half - k) % half]);
        const std::complex<double> even = 0.5 * (zk + zmk);
        const std::complex<double> odd = std::complex<double>(0.0, -0.5) * (zk - zmk);
        const double a = step * static_cast<double>(k);
        out[k] = even + std::complex<double>(std::cos(a), std::sin(a)) * odd;
    }
    return out;
}

std::vector<double> real_inverse(std::span<const std::complex<double>> spectrum,
                                 std::size_t n) {
    if (!is_pow2(n) || n < 2)
        throw std::invalid_argument("real_inverse size must be a power of two >= 2");
    const std::size_t half = n / 2;
    if (spectrum.size() != half + 1)
        throw std::invalid_argument("real_inverse spectrum must have n/2 + 1 bins");

    std::vector<std::complex<double>> z(half);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> hk = spectrum[k];
        const std::complex<double> hmk = std::conj(spectrum[half - k]);
        const std::complex<double> even = 0.5 * (hk + hmk);
        const std::complex<double> odd = 0.5 * (hk - hmk);
        const double a = step * static_cast<double>(k);
        // Undo the even/odd recombination of real_forward.
        z[k] = even + std::complex<double>(0.0, 1.0) *
                          (std::complex<double>(std::cos(a), std::sin(a)) * odd);
    }
    transform(z, true);

    std::vector<double> x(n);
    for (std::size_t m = 0; m < half; ++m) {
        x[2 * m] = z[m].real();
        x[2 * m + 1] = z[m].imag();
    }
    return x;
}

}  // namespace memnoise::fft
